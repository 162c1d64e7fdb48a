#include "dynmatch/core.hpp"

#include "dynmatch/rational.hpp"
#include "dynmatch/rng.hpp"

#include <limits>
#include <sstream>

namespace dynmatch {

std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

DynamicGraph::DynamicGraph(int n) {
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  adj_.resize(n);
}

void DynamicGraph::check_vertex(int v) const {
  if (v < 0 || v >= n())
    throw InvalidVertex("vertex " + std::to_string(v) + " out of range [0," +
                        std::to_string(n()) + ")");
}

void DynamicGraph::insert_edge(Edge e) {
  check_vertex(e.u);
  check_vertex(e.v);
  if (e.u == e.v) throw SelfLoop("self loop at vertex " + std::to_string(e.u));
  if (edges_.count(e))
    throw DuplicateEdge("edge " + to_string(e) + " already present");
  edges_.insert(e);
  adj_[e.u].insert(e.v);
  adj_[e.v].insert(e.u);
}

void DynamicGraph::delete_edge(Edge e) {
  check_vertex(e.u);
  check_vertex(e.v);
  if (!edges_.count(e)) throw MissingEdge("edge " + to_string(e) + " not present");
  edges_.erase(e);
  adj_[e.u].erase(e.v);
  adj_[e.v].erase(e.u);
}

bool DynamicGraph::has_edge(Edge e) const {
  return edges_.count(e) != 0;
}

int DynamicGraph::degree(int v) const {
  check_vertex(v);
  return static_cast<int>(adj_[v].size());
}

const std::set<int>& DynamicGraph::neighbors(int v) const {
  check_vertex(v);
  return adj_[v];
}

void Matching::add(Edge e) {
  if (e.u < 0 || e.v >= n() || e.u == e.v)
    throw std::invalid_argument("bad matching edge " + to_string(e));
  if (covers(e.u) || covers(e.v))
    throw std::logic_error("matching conflict at " + to_string(e));
  edges_.insert(e);
  mate_[e.u] = e.v;
  mate_[e.v] = e.u;
}

void Matching::remove(Edge e) {
  if (!edges_.count(e))
    throw std::logic_error("edge " + to_string(e) + " not in matching");
  edges_.erase(e);
  mate_[e.u] = -1;
  mate_[e.v] = -1;
}

void Matching::clear() {
  edges_.clear();
  mate_.assign(mate_.size(), -1);
}

bool matching_is_valid(const DynamicGraph& g, const Matching& m) {
  std::vector<char> seen(g.n(), 0);
  for (const Edge& e : m.edges()) {
    if (!g.has_edge(e)) return false;
    if (seen[e.u] || seen[e.v]) return false;
    seen[e.u] = seen[e.v] = 1;
  }
  return true;
}

// --- rational helpers ---

Rational pow_rational(const Rational& base, long exp) {
  if (exp == 0) return Rational(1);
  bool invert = exp < 0;
  unsigned long k = invert ? -static_cast<unsigned long>(exp) : exp;
  Rational acc(1), sq = base;
  while (k) {
    if (k & 1) acc *= sq;
    sq *= sq;
    k >>= 1;
  }
  if (invert) {
    if (acc == 0) throw std::domain_error("negative power of zero");
    acc = Rational(1) / acc;
  }
  return acc;
}

namespace {

// Decimal-only integer parse: a leading zero must not flip the base to octal
// the way the bignum string constructor does.
BigInt parse_decimal(const std::string& t) {
  std::string s = t;
  bool neg = false;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  while (i + 1 < s.size() && s[i] == '0') ++i;
  BigInt v(s.substr(i));
  return neg ? -v : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num = parse_decimal(s.substr(0, slash));
      BigInt den = parse_decimal(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(parse_decimal(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0 || digits.empty()) throw std::invalid_argument("bad decimal");
    BigInt den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(parse_decimal(digits), den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("cannot parse rational '" + text + "'");
  }
}

double to_double(const Rational& x) {
  return x.convert_to<double>();
}

std::string format_rational(const Rational& x) {
  std::ostringstream out;
  if (denominator(x) == 1) {
    out << numerator(x);
  } else {
    out << numerator(x) << "/" << denominator(x);
  }
  return out.str();
}

long ceil_log(const Rational& base, const Rational& x) {
  if (base <= 1) throw std::domain_error("ceil_log requires base > 1");
  long k = 0;
  Rational p(1);
  while (p < x) {
    p *= base;
    ++k;
    if (k > 1000000) throw std::domain_error("ceil_log argument out of range");
  }
  return k;
}

BigInt ceil_rational(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (q * denominator(x) < numerator(x)) ++q;
  return q;
}

uint64_t floor_to_uint64(const Rational& x) {
  if (x <= 0) return 0;
  BigInt q = numerator(x) / denominator(x);
  BigInt cap = BigInt(std::numeric_limits<uint64_t>::max());
  if (q > cap) return std::numeric_limits<uint64_t>::max();
  return q.convert_to<uint64_t>();
}

namespace rng {
bool bernoulli(uint64_t draw, const Rational& p) {
  if (p >= 1) return true;
  if (p <= 0) return false;
  // draw / 2^64 < num/den  <=>  draw * den < num << 64
  BigInt lhs = BigInt(draw) * denominator(p);
  BigInt rhs = numerator(p) << 64;
  return lhs < rhs;
}
}  // namespace rng

}  // namespace dynmatch
