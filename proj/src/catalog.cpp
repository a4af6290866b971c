#include "pkahler/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace pkahler::catalog {

namespace {

ManifoldSpec blank(std::string name, int n) {
  ManifoldSpec s;
  s.name = std::move(name);
  s.n = n;
  s.d_phi.assign(n, Form(n));
  return s;
}

Form mono(int n, std::initializer_list<int> I, std::initializer_list<int> J = {}) {
  return Form::monomial(n, from_indices(I), from_indices(J));
}

}  // namespace

ManifoldSpec torus(int n) {
  if (n < 1) throw std::invalid_argument("torus dimension must be positive");
  return blank("torus " + std::to_string(n), n);
}

ManifoldSpec iwasawa() {
  auto s = blank("iwasawa", 3);
  s.d_phi[2] = mono(3, {1, 2});
  return s;
}

ManifoldSpec eta_beta(int N) {
  if (N < 1) throw std::invalid_argument("eta_beta parameter must be positive");
  const int n = 2 * N + 1;
  auto s = blank("eta_beta " + std::to_string(N), n);
  for (int i = 1; i <= N; ++i) s.d_phi[n - 1] += mono(n, {2 * i - 1, 2 * i});
  return s;
}

ManifoldSpec i3_t(const GaussianRational& t) {
  auto s = blank("i3_t " + t.to_string(), 3);
  s.d_phi[2] = mono(3, {1, 2}) - t * mono(3, {2}, {2});
  return s;
}

ManifoldSpec i3_1() {
  auto s = blank("i3_1", 3);
  GaussianRational half_i(0, Rational(1, 2));
  s.d_phi[2] = mono(3, {1, 2}) + half_i * (mono(3, {1}, {1}) + GaussianRational(2) * mono(3, {2}, {2}));
  return s;
}

ManifoldSpec efv8() {
  auto s = blank("efv8", 4);
  s.d_phi[2] = mono(4, {1, 2}) + mono(4, {1}, {1}) + mono(4, {2}, {2});
  s.d_phi[3] = mono(4, {1, 2});
  return s;
}

namespace {

std::pair<std::string, std::string> split_name(std::string name) {
  std::replace(name.begin(), name.end(), ':', ' ');
  std::istringstream is(name);
  std::string head, rest, tok;
  is >> head;
  while (is >> tok) rest += (rest.empty() ? "" : " ") + tok;
  return {head, rest};
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: " + s);
  q.canonicalize();
  return q;
}

int parse_int(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw std::invalid_argument("expected a positive integer, got '" + s + "'");
  return std::stoi(s);
}

}  // namespace

ManifoldSpec by_name(const std::string& name) {
  auto [head, arg] = split_name(name);
  if (head == "torus") return torus(parse_int(arg));
  if (head == "iwasawa" && arg.empty()) return iwasawa();
  if (head == "eta_beta") return eta_beta(parse_int(arg));
  if (head == "i3_t") return i3_t(GaussianRational(parse_rational(arg)));
  if (head == "i3_1" && arg.empty()) return i3_1();
  if (head == "efv8" && arg.empty()) return efv8();
  throw std::invalid_argument("unknown catalog manifold '" + name + "'");
}

bool is_catalog_name(const std::string& name) {
  try {
    by_name(name);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::vector<std::string> names() { return {"torus N", "iwasawa", "eta_beta N", "i3_t T", "i3_1", "efv8"}; }

}  // namespace pkahler::catalog
