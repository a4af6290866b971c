#include "pkahler/spec_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "pkahler/catalog.hpp"

namespace pkahler {

namespace {

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

class Cursor {
 public:
  explicit Cursor(std::string s) : s_(std::move(s)) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool starts(std::string_view w) const { return s_.compare(pos_, w.size(), w) == 0; }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  void skip(std::size_t k) { pos_ += k; }
  const std::string& text() const { return s_; }

  std::optional<mpz_class> integer() {
    std::size_t b = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (b == pos_) return std::nullopt;
    return mpz_class(s_.substr(b, pos_ - b));
  }

  // unsigned a or a/b
  std::optional<Rational> rational() {
    std::size_t b = pos_;
    auto num = integer();
    if (!num) return std::nullopt;
    if (peek() == '/') {
      ++pos_;
      auto den = integer();
      if (!den) {
        pos_ = b;
        return std::nullopt;
      }
      if (*den == 0) throw std::invalid_argument("zero denominator in '" + s_ + "'");
      Rational q(*num, *den);
      q.canonicalize();
      return q;
    }
    return Rational(*num);
  }

  // B i or i
  std::optional<Rational> imaginary() {
    std::size_t b = pos_;
    auto mag = rational();
    if (peek() == 'i') {
      ++pos_;
      return mag ? *mag : Rational(1);
    }
    pos_ = b;
    return std::nullopt;
  }

  // A | A (+|-) B i | B i; unsigned leading part
  std::optional<GaussianRational> literal() {
    if (auto im = imaginary()) return GaussianRational(0, *im);
    auto re = rational();
    if (!re) return std::nullopt;
    std::size_t b = pos_;
    if (peek() == '+' || peek() == '-') {
      const bool neg = peek() == '-';
      ++pos_;
      if (auto im = imaginary()) return GaussianRational(*re, neg ? -*im : *im);
      pos_ = b;
    }
    return GaussianRational(*re);
  }

 private:
  std::string s_;
  std::size_t pos_ = 0;
};

struct Factor {
  bool bar;
  int index;
};

std::optional<std::vector<Factor>> monomial(Cursor& c, int n) {
  std::vector<Factor> out;
  while (true) {
    bool bar;
    if (c.starts("phi")) bar = false;
    else if (c.starts("bar")) bar = true;
    else break;
    c.skip(3);
    auto k = c.integer();
    if (!k) throw std::invalid_argument(std::string(bar ? "bar" : "phi") + " without an index");
    if (*k < 1 || *k > n)
      throw std::invalid_argument("index " + k->get_str() + " outside the frame 1.." + std::to_string(n));
    out.push_back({bar, static_cast<int>(k->get_si())});
    if (c.peek() != '^') break;
    c.skip(1);
    if (!c.starts("phi") && !c.starts("bar")) throw std::invalid_argument("dangling '^'");
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// Sorts phi factors before bar factors (each increasing); 0 on a repeat.
int normalize(const std::vector<Factor>& fs, Mask& I, Mask& J) {
  std::vector<int> w;
  for (const auto& f : fs) w.push_back(f.bar ? 100 + f.index : f.index);
  int sign = 1;
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      if (w[a] == w[b]) return 0;
      if (w[a] > w[b]) sign = -sign;
    }
  I = J = 0;
  for (const auto& f : fs) (f.bar ? J : I) |= bit(f.index);
  return sign;
}

bool leading_negative(const GaussianRational& c) { return sgn(c.re()) < 0 || (sgn(c.re()) == 0 && sgn(c.im()) < 0); }

// A sign written before a literal belongs to its real part when there is one: "- 1 + 2 i" is -1 + 2i.
GaussianRational negate_leading(const GaussianRational& v) {
  return sgn(v.re()) != 0 ? GaussianRational(-v.re(), v.im()) : -v;
}

std::string monomial_text(Mask I, Mask J) {
  std::string out;
  for (int i : indices(I)) out += (out.empty() ? "" : "^") + std::string("phi") + std::to_string(i);
  for (int j : indices(J)) out += (out.empty() ? "" : "^") + std::string("bar") + std::to_string(j);
  return out;
}

bool term_order(const std::pair<Mask, Mask>& x, const std::pair<Mask, Mask>& y) {
  int dx = degree(x.first) + degree(x.second), dy = degree(y.first) + degree(y.second);
  if (dx != dy) return dx < dy;
  if (degree(x.first) != degree(y.first)) return degree(x.first) > degree(y.first);
  if (x.first != y.first) return lex_less(x.first, y.first);
  return lex_less(x.second, y.second);
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  for (auto& l : out) {
    auto h = l.find('#');
    if (h != std::string::npos) l.erase(h);
  }
  return out;
}

// "key: value" header lines
std::optional<std::pair<std::string, std::string>> header(const std::string& line) {
  auto colon = line.find(':');
  if (colon == std::string::npos) return std::nullopt;
  std::string key = trim(std::string_view(line).substr(0, colon));
  if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  return std::make_pair(key, trim(std::string_view(line).substr(colon + 1)));
}

int parse_dimension(const std::string& v, int line) {
  std::string s = strip_ws(v);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError(line, "dimension '" + v + "' is not a positive integer");
  long n = s.size() > 3 ? 1000 : std::stol(s);
  if (n < 1 || n > kMaxDim) throw ParseError(line, "dimension must lie in 1.." + std::to_string(kMaxDim));
  return static_cast<int>(n);
}

}  // namespace

GaussianRational parse_gaussian(std::string_view text) {
  Cursor c(strip_ws(text));
  bool neg = false;
  if (c.peek() == '-' || c.peek() == '+') {
    neg = c.peek() == '-';
    c.skip(1);
  }
  auto v = c.literal();
  if (!v || !c.done()) throw std::invalid_argument("not a Gaussian-rational literal: '" + std::string(text) + "'");
  return neg ? negate_leading(*v) : *v;
}

Form parse_expression(std::string_view text, int n) {
  Cursor c(strip_ws(text));
  Form out(n);
  if (c.text().empty()) throw std::invalid_argument("empty expression");
  if (c.text() == "0") return out;
  bool first = true;
  while (!c.done()) {
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
      neg = c.peek() == '-';
      c.skip(1);
    } else if (!first) {
      throw std::invalid_argument("expected '+' or '-' at '" + c.text().substr(c.pos()) + "'");
    }
    first = false;
    const std::size_t at = c.pos();
    auto coeff = c.literal();
    if (coeff && c.peek() == '*') c.skip(1);
    auto mono = monomial(c, n);
    if (!coeff && !mono) throw std::invalid_argument("expected a term at '" + c.text().substr(at) + "'");
    GaussianRational v = coeff ? *coeff : GaussianRational(1);
    if (neg) v = negate_leading(v);
    Mask I = 0, J = 0;
    int s = mono ? normalize(*mono, I, J) : 1;
    if (s == 0) continue;
    out.add(I, J, s > 0 ? v : -v);
  }
  return out;
}

std::string format_expression(const Form& f) {
  if (f.is_zero()) return "0";
  std::vector<std::pair<std::pair<Mask, Mask>, GaussianRational>> terms(f.terms().begin(), f.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return term_order(a.first, b.first); });
  std::string out;
  for (const auto& [k, c] : terms) {
    const bool neg = leading_negative(c);
    const GaussianRational shown = neg ? negate_leading(c) : c;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    out += shown.to_string();
    std::string m = monomial_text(k.first, k.second);
    if (!m.empty()) out += " " + m;
  }
  return out;
}

ManifoldSpec parse_spec(std::string_view text) {
  ManifoldSpec spec;
  bool have_name = false;
  std::vector<bool> seen;
  const auto lines = lines_of(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    const std::string& line = lines[li];
    if (trim(line).empty()) continue;
    if (auto h = header(line)) {
      if (h->first == "name") {
        if (h->second.empty()) throw ParseError(ln, "empty name");
        spec.name = h->second;
        have_name = true;
      } else if (h->first == "dimension") {
        if (spec.n) throw ParseError(ln, "dimension given twice");
        spec.n = parse_dimension(h->second, ln);
        spec.d_phi.assign(spec.n, Form(spec.n));
        seen.assign(spec.n, false);
      } else {
        throw ParseError(ln, "unknown header '" + h->first + "'");
      }
      continue;
    }
    std::string s = strip_ws(line);
    if (s.rfind("dphi", 0) != 0) throw ParseError(ln, "expected 'd phi<k> = ...' or a header, got '" + trim(line) + "'");
    if (!spec.n) throw ParseError(ln, "structure equation before the dimension header");
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(ln, "missing '='");
    const std::string ks = s.substr(4, eq - 4);
    if (ks.empty() || ks.size() > 3 || !std::all_of(ks.begin(), ks.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError(ln, "bad index in 'd phi" + ks + "'");
    const int k = std::stoi(ks);
    if (k < 1 || k > spec.n) throw ParseError(ln, "d phi" + ks + " outside the frame 1.." + std::to_string(spec.n));
    if (seen[k - 1]) throw ParseError(ln, "d phi" + ks + " given twice");
    seen[k - 1] = true;
    Form f(spec.n);
    try {
      f = parse_expression(s.substr(eq + 1), spec.n);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ln, std::string("d phi") + ks + ": " + e.what());
    }
    for (const auto& [key, c] : f.terms())
      if (degree(key.first) + degree(key.second) != 2)
        throw ParseError(ln, "d phi" + ks + ": term " + format_expression(Form::monomial(spec.n, key.first, key.second, c)) +
                                 " is not a 2-form");
    spec.d_phi[k - 1] = f;
  }
  if (!have_name) throw ParseError(0, "missing 'name:' header");
  if (!spec.n) throw ParseError(0, "missing 'dimension:' header");
  return spec;
}

std::string print_spec(const ManifoldSpec& spec) {
  std::ostringstream os;
  os << "name: " << spec.name << "\n";
  os << "dimension: " << spec.n << "\n";
  for (int k = 1; k <= spec.n; ++k) os << "d phi" << k << " = " << format_expression(spec.d_phi[k - 1]) << "\n";
  return os.str();
}

Form parse_form_file(std::string_view text) {
  int n = 0;
  std::optional<Form> f;
  const auto lines = lines_of(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    if (trim(lines[li]).empty()) continue;
    if (auto h = header(lines[li])) {
      if (h->first != "dimension") throw ParseError(ln, "unknown header '" + h->first + "'");
      if (n) throw ParseError(ln, "dimension given twice");
      n = parse_dimension(h->second, ln);
      f = Form(n);
      continue;
    }
    if (!n) throw ParseError(ln, "term before the dimension header");
    try {
      *f += parse_expression(lines[li], n);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ln, e.what());
    }
  }
  if (!n) throw ParseError(0, "missing 'dimension:' header");
  return *f;
}

std::string print_form_file(const Form& f) {
  std::ostringstream os;
  os << "dimension: " << f.dim() << "\n";
  std::vector<std::pair<std::pair<Mask, Mask>, GaussianRational>> terms(f.terms().begin(), f.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return term_order(a.first, b.first); });
  for (const auto& [k, c] : terms) os << format_expression(Form::monomial(f.dim(), k.first, k.second, c)) << "\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ManifoldSpec load_spec(const std::string& name_or_path) {
  if (!std::filesystem::exists(name_or_path) && catalog::is_catalog_name(name_or_path))
    return catalog::by_name(name_or_path);
  if (!std::filesystem::exists(name_or_path))
    throw std::runtime_error("'" + name_or_path + "' is neither a catalog name nor a readable file");
  return parse_spec(read_file(name_or_path));
}

}  // namespace pkahler
