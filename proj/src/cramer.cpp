#include "bwedge/cramer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bwedge/error.hpp"

namespace bwedge {
namespace {

using Rational = ExactReal::Rational;

constexpr std::array<double, ExactReal::kBasis> kBasisValue{
    1.0, std::numbers::e, std::numbers::pi, std::numbers::sqrt2, std::numbers::ln2};
constexpr std::array<const char*, ExactReal::kBasis> kBasisName{"1", "e", "pi", "sqrt2", "ln2"};

constexpr double kExactTolerance = 1e-12;
// Floating atoms: multiples of machine epsilon tolerated on differences.
constexpr double kFloatResolution = 8.0 * std::numeric_limits<double>::epsilon();
constexpr double kUnitModulusTolerance = 1e-12;
constexpr double kPeriodTolerance = 1e-10;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<long long> parse_digits(std::string_view s) {
  if (s.empty() || s.size() > 17) return std::nullopt;
  long long v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

// "[-]a", "[-]a/b" or "[-]a.b" as an exact rational.
std::optional<Rational> parse_rational(std::string_view s) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::optional<Rational> out;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_digits(s.substr(0, slash));
    const auto den = parse_digits(s.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    out = Rational(*num, *den);
  } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto whole = dot == 0 ? std::optional<long long>(0) : parse_digits(s.substr(0, dot));
    const auto frac_text = s.substr(dot + 1);
    const auto frac = parse_digits(frac_text);
    if (!whole || !frac || frac_text.size() > 15) return std::nullopt;
    long long scale = 1;
    for (std::size_t i = 0; i < frac_text.size(); ++i) scale *= 10;
    out = Rational(*whole) + Rational(*frac, scale);
  } else {
    const auto v = parse_digits(s);
    if (!v) return std::nullopt;
    out = Rational(*v);
  }
  if (negative) *out = -*out;
  return out;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  const long long l = std::lcm(a.denominator(), b.denominator());
  const long long na = a.numerator() * (l / a.denominator());
  const long long nb = b.numerator() * (l / b.denominator());
  return Rational(std::gcd(na, nb), l);
}

// Best rational approximation h/k of x with k <= bound and |x - h/k| <= tol.
std::optional<std::pair<long long, long long>> commensurate(double x, long long bound, double tol) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    if (std::abs(a) > 9e15) return std::nullopt;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > bound) return std::nullopt;
    if (std::abs(x - static_cast<double>(h2) / static_cast<double>(k2)) <= tol) return std::make_pair(h2, k2);
    const double frac = rest - a;
    if (frac <= 0.0) return std::nullopt;
    rest = 1.0 / frac;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return std::nullopt;
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> as_vector(std::span<const double> t) { return {t.begin(), t.end()}; }

void validate_probs(std::span<const double> probs, std::size_t count) {
  if (probs.size() != count) fail(ErrorCode::IllegalParameter, "atoms and probabilities differ in length");
  double total = 0.0;
  for (double q : probs) {
    if (!(q >= 0.0)) fail(ErrorCode::IllegalParameter, "probabilities must be nonnegative");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12) fail(ErrorCode::IllegalParameter, "probabilities must sum to 1");
}

// Rank of the row set and, when rank < d, a unit vector orthogonal to all rows.
std::pair<int, std::vector<double>> rank_and_normal(std::vector<std::vector<double>> rows, int d) {
  double scale = 0.0;
  for (const auto& r : rows) {
    for (double v : r) scale = std::max(scale, std::abs(v));
  }
  const double tol = kExactTolerance * std::max(1.0, scale);
  std::vector<int> pivot_cols;
  std::size_t row = 0;
  for (int col = 0; col < d && row < rows.size(); ++col) {
    std::size_t best = row;
    for (std::size_t r = row; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[best][col])) best = r;
    }
    if (std::abs(rows[best][col]) <= tol) continue;
    std::swap(rows[row], rows[best]);
    const double pivot = rows[row][col];
    for (double& v : rows[row]) v /= pivot;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == row) continue;
      const double factor = rows[r][col];
      if (factor == 0.0) continue;
      for (int c = 0; c < d; ++c) rows[r][c] -= factor * rows[row][c];
    }
    pivot_cols.push_back(col);
    ++row;
  }
  const int rank = static_cast<int>(pivot_cols.size());
  if (rank == d) return {rank, {}};
  int free_col = 0;
  while (std::find(pivot_cols.begin(), pivot_cols.end(), free_col) != pivot_cols.end()) ++free_col;
  std::vector<double> normal(static_cast<std::size_t>(d), 0.0);
  normal[static_cast<std::size_t>(free_col)] = 1.0;
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    normal[static_cast<std::size_t>(pivot_cols[i])] = -rows[i][free_col];
  }
  double norm = 0.0;
  for (double v : normal) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : normal) v /= norm;
  const auto first = std::find_if(normal.begin(), normal.end(), [](double v) { return std::abs(v) > 1e-15; });
  if (first != normal.end() && *first < 0.0) {
    for (double& v : normal) v = -v;
  }
  return {rank, normal};
}

// Canonical primitive integer directions with max |component| == h, ordered by
// support size, then by position of the leading nonzero, then lexicographically.
std::vector<std::vector<long long>> directions_of_height(int d, int h) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> v(static_cast<std::size_t>(d), -h);
  while (true) {
    const bool on_shell = std::any_of(v.begin(), v.end(), [h](long long c) { return std::llabs(c) == h; });
    const auto lead = std::find_if(v.begin(), v.end(), [](long long c) { return c != 0; });
    if (on_shell && lead != v.end() && *lead > 0) {
      long long g = 0;
      for (long long c : v) g = std::gcd(g, std::llabs(c));
      if (g == 1) out.push_back(v);
    }
    std::size_t i = 0;
    while (i < v.size() && v[i] == h) v[i++] = -h;
    if (i == v.size()) break;
    ++v[i];
  }
  auto key = [](const std::vector<long long>& u) {
    const auto nnz = std::count_if(u.begin(), u.end(), [](long long c) { return c != 0; });
    const auto lead = std::find_if(u.begin(), u.end(), [](long long c) { return c != 0; }) - u.begin();
    std::vector<long long> neg(u.size());
    std::transform(u.begin(), u.end(), neg.begin(), [](long long c) { return -c; });
    return std::make_tuple(nnz, lead, neg);
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return out;
}

std::vector<Atom> project(const std::vector<std::vector<Atom>>& vectors, const std::vector<long long>& t) {
  std::vector<Atom> out;
  out.reserve(vectors.size());
  for (const auto& x : vectors) {
    bool exact = true;
    ExactReal acc;
    double approx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      approx += static_cast<double>(t[i]) * x[i].value;
      if (x[i].exact) {
        acc = acc + *x[i].exact * Rational(t[i]);
      } else {
        exact = false;
      }
    }
    out.push_back(exact ? Atom::of(acc) : Atom::approx(approx));
  }
  return out;
}

std::complex<double> atoms_cf(const std::vector<std::vector<double>>& points, std::span<const double> probs,
                              std::span<const double> t) {
  using namespace std::complex_literals;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double phase = 0.0;
    for (std::size_t c = 0; c < t.size(); ++c) phase += t[c] * points[i][c];
    acc += probs[i] * std::exp(1i * phase);
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------- ExactReal

ExactReal ExactReal::rational(long long num, long long den) {
  if (den == 0) fail(ErrorCode::IllegalParameter, "zero denominator");
  ExactReal v;
  v.coords_[0] = Rational(num, den);
  return v;
}

ExactReal ExactReal::constant(Constant c, Rational coeff) {
  ExactReal v;
  v.coords_[static_cast<std::size_t>(c)] = coeff;
  return v;
}

std::optional<ExactReal> ExactReal::parse(std::string_view text) {
  text = trim(text);
  Rational coeff(1);
  std::string_view name = text;
  if (const auto star = text.find('*'); star != std::string_view::npos) {
    const auto c = parse_rational(text.substr(0, star));
    if (!c) return std::nullopt;
    coeff = *c;
    name = trim(text.substr(star + 1));
  } else if (!name.empty() && name.front() == '-' && !parse_rational(name)) {
    coeff = Rational(-1);
    name.remove_prefix(1);
  }
  for (std::size_t i = 1; i < kBasis; ++i) {
    if (name == kBasisName[i]) return constant(static_cast<Constant>(i), coeff);
  }
  if (name == "π") return constant(Constant::Pi, coeff);
  if (name.data() != text.data()) return std::nullopt;  // coefficient given, but no known constant
  const auto r = parse_rational(text);
  if (!r) return std::nullopt;
  ExactReal v;
  v.coords_[0] = *r;
  return v;
}

double ExactReal::value() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < kBasis; ++i) acc += boost::rational_cast<double>(coords_[i]) * kBasisValue[i];
  return acc;
}

bool ExactReal::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& r) { return r.numerator() == 0; });
}

std::optional<ExactReal::Rational> ExactReal::ratio_to(const ExactReal& other) const {
  const auto lead = std::find_if(other.coords_.begin(), other.coords_.end(), [](const Rational& r) { return r.numerator() != 0; });
  if (lead == other.coords_.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(lead - other.coords_.begin());
  const Rational r = coords_[idx] / other.coords_[idx];
  for (std::size_t i = 0; i < kBasis; ++i) {
    if (coords_[i] != r * other.coords_[i]) return std::nullopt;
  }
  return r;
}

ExactReal ExactReal::operator+(const ExactReal& o) const {
  ExactReal v;
  for (std::size_t i = 0; i < kBasis; ++i) v.coords_[i] = coords_[i] + o.coords_[i];
  return v;
}

ExactReal ExactReal::operator-(const ExactReal& o) const {
  ExactReal v;
  for (std::size_t i = 0; i < kBasis; ++i) v.coords_[i] = coords_[i] - o.coords_[i];
  return v;
}

ExactReal ExactReal::operator*(const Rational& r) const {
  ExactReal v;
  for (std::size_t i = 0; i < kBasis; ++i) v.coords_[i] = coords_[i] * r;
  return v;
}

std::string ExactReal::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kBasis; ++i) {
    const Rational& c = coords_[i];
    if (c.numerator() == 0) continue;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    const Rational mag = c < 0 ? -c : c;
    std::ostringstream os;
    os << mag.numerator();
    if (mag.denominator() != 1) os << '/' << mag.denominator();
    if (i == 0) {
      out += os.str();
    } else {
      out += (mag == Rational(1) ? std::string() : os.str() + "*") + kBasisName[i];
    }
  }
  return out.empty() ? "0" : out;
}

Atom Atom::parse(std::string_view text) {
  if (auto exact = ExactReal::parse(text)) return Atom::of(*exact);
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, "cannot parse atom '" + s + "'");
  }
  if (used != s.size()) fail(ErrorCode::ConfigError, "cannot parse atom '" + s + "'");
  return Atom::approx(v);
}

// ---------------------------------------------------------------- supports

int SupportSpec::dimension() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Atoms1D>) {
          return 1;
        } else if constexpr (std::is_same_v<T, AtomsND>) {
          return k.vectors.empty() ? 0 : static_cast<int>(k.vectors.front().size());
        } else if constexpr (std::is_same_v<T, LinearImage>) {
          return static_cast<int>(k.coeffs.size());
        } else {
          return 2;
        }
      },
      kind);
}

SupportSpec SupportSpec::from_distribution(const DistributionSpec& d) {
  const auto* discrete = std::get_if<FiniteDiscrete>(&d.params());
  if (!discrete) fail(ErrorCode::IllegalParameter, "only discrete laws have a finite support");
  Atoms1D out;
  for (double a : discrete->atoms) out.atoms.push_back(Atom::approx(a));
  out.probs = discrete->probs;
  return SupportSpec{out};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Lattice: return "Lattice";
    case Verdict::SemiLattice: return "SemiLattice";
    case Verdict::NonLattice: return "NonLattice";
    case Verdict::Unresolved: return "Unresolved";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- 1-D check

LatticeVerdict lattice_check_1d(std::span<const Atom> atoms, std::span<const double> probs,
                                const LatticeOptions& options) {
  if (atoms.empty()) fail(ErrorCode::EmptySupport, "no atoms");
  validate_probs(probs, atoms.size());
  std::vector<Atom> support;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (probs[i] > 0.0) support.push_back(atoms[i]);
  }
  if (support.empty()) fail(ErrorCode::EmptySupport, "no atom carries positive mass");

  const auto lowest = *std::min_element(support.begin(), support.end(),
                                        [](const Atom& a, const Atom& b) { return a.value < b.value; });
  LatticeVerdict verdict;
  verdict.offset = lowest.value;
  const bool all_exact = std::all_of(support.begin(), support.end(), [](const Atom& a) { return a.exact.has_value(); });

  if (all_exact) {
    std::vector<ExactReal> diffs;
    for (const auto& a : support) {
      auto d = *a.exact - *lowest.exact;
      if (!d.is_zero()) diffs.push_back(std::move(d));
    }
    if (diffs.empty()) {
      verdict.verdict = Verdict::Lattice;
      verdict.evidence = "single support point " + lowest.exact->to_string() + "; degenerate lattice with span 0";
      return verdict;
    }
    const ExactReal& ref = diffs.front();
    Rational g(0);
    for (const auto& d : diffs) {
      const auto r = d.ratio_to(ref);
      if (!r) {
        verdict.verdict = Verdict::NonLattice;
        verdict.evidence = "differences (" + d.to_string() + ") and (" + ref.to_string() +
                           ") are rationally independent over the basis {1, e, pi, sqrt2, ln2}";
        return verdict;
      }
      g = g.numerator() == 0 ? (*r < 0 ? -*r : *r) : rational_gcd(g, *r);
    }
    const ExactReal span = ref * g;
    const double span_value = std::abs(span.value());
    // Certify: each difference is an integer multiple of the span, exactly and in floating point.
    for (const auto& d : diffs) {
      const auto m = d.ratio_to(span);
      const double q = (d.value()) / span.value();
      if (!m || m->denominator() != 1 || std::abs(q - std::round(q)) > kExactTolerance * std::max(1.0, std::abs(q))) {
        verdict.verdict = Verdict::Unresolved;
        verdict.evidence = "span certification failed for difference " + d.to_string();
        return verdict;
      }
    }
    verdict.verdict = Verdict::Lattice;
    verdict.span = span_value;
    verdict.evidence = "exact: support in {" + lowest.exact->to_string() + " + k*(" +
                       (span.value() < 0 ? (span * Rational(-1)).to_string() : span.to_string()) + ")}";
    return verdict;
  }

  // Differences carry rounding of order eps * (largest |atom|); ratios of
  // differences are only trusted to that resolution relative to the smallest one.
  double scale = 0.0;
  for (const auto& a : support) scale = std::max(scale, std::abs(a.value));
  const double abs_tol = kFloatResolution * std::max(scale, std::numeric_limits<double>::min());
  std::vector<double> diffs;
  for (const auto& a : support) {
    const double d = a.value - lowest.value;
    if (d > abs_tol) diffs.push_back(d);
  }
  if (diffs.empty()) {
    verdict.verdict = Verdict::Lattice;
    verdict.evidence = "single support point at floating resolution; degenerate lattice with span 0";
    return verdict;
  }
  const double ref = *std::min_element(diffs.begin(), diffs.end());
  const double rel_tol = abs_tol / ref;
  long long common = 1;
  for (double d : diffs) {
    const double ratio = d / ref;
    const auto hk = commensurate(ratio, options.denominator_bound, rel_tol * std::max(1.0, ratio));
    if (!hk) {
      verdict.verdict = Verdict::Unresolved;
      verdict.evidence = "difference ratio " + format(ratio) + " has no rational approximation with denominator <= " +
                         std::to_string(options.denominator_bound) + " within " + format(rel_tol * std::max(1.0, ratio));
      return verdict;
    }
    common = std::lcm(common, hk->second);
    if (common > options.denominator_bound) {
      verdict.verdict = Verdict::Unresolved;
      verdict.evidence = "common denominator exceeds bound " + std::to_string(options.denominator_bound);
      return verdict;
    }
  }
  const double span = ref / static_cast<double>(common);
  for (double d : diffs) {
    const double q = d / span;
    if (std::abs(q - std::round(q)) > rel_tol * static_cast<double>(common) * std::max(1.0, std::abs(q))) {
      verdict.verdict = Verdict::Unresolved;
      verdict.evidence = "span certification failed at floating resolution";
      return verdict;
    }
  }
  verdict.verdict = Verdict::Lattice;
  verdict.span = span;
  verdict.evidence = "floating atoms commensurable at denominator bound " + std::to_string(options.denominator_bound) +
                     ": support in {" + format(lowest.value) + " + k*" + format(span) + "}";
  return verdict;
}

// ---------------------------------------------------------------- d-D search

LatticeVerdict semilattice_search(const SupportSpec& s, const LatticeOptions& options) {
  return std::visit(
      [&](const auto& k) -> LatticeVerdict {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Atoms1D>) {
          auto v = lattice_check_1d(k.atoms, k.probs, options);
          if (v.verdict == Verdict::Lattice) {
            v.verdict = Verdict::SemiLattice;
            v.direction = {1.0};
          }
          return v;
        } else if constexpr (std::is_same_v<T, AtomsND>) {
          if (k.vectors.empty()) fail(ErrorCode::EmptySupport, "no atoms");
          validate_probs(k.probs, k.vectors.size());
          const auto d = static_cast<int>(k.vectors.front().size());
          if (d == 0) fail(ErrorCode::IllegalParameter, "zero-dimensional atoms");
          std::vector<std::vector<Atom>> support;
          for (std::size_t i = 0; i < k.vectors.size(); ++i) {
            if (static_cast<int>(k.vectors[i].size()) != d) fail(ErrorCode::IllegalParameter, "atoms differ in dimension");
            if (k.probs[i] > 0.0) support.push_back(k.vectors[i]);
          }
          if (support.empty()) fail(ErrorCode::EmptySupport, "no atom carries positive mass");
          if (d == 1) {
            std::vector<Atom> flat;
            std::vector<double> probs(support.size(), 1.0 / static_cast<double>(support.size()));
            for (const auto& x : support) flat.push_back(x[0]);
            return semilattice_search(SupportSpec{Atoms1D{flat, probs}}, options);
          }

          std::vector<std::vector<double>> diffs;
          for (const auto& x : support) {
            std::vector<double> row(static_cast<std::size_t>(d));
            for (int c = 0; c < d; ++c) row[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)].value - support[0][static_cast<std::size_t>(c)].value;
            diffs.push_back(std::move(row));
          }
          const auto [rank, normal] = rank_and_normal(diffs, d);
          if (rank < d) {
            LatticeVerdict v;
            v.direction = normal;
            for (int c = 0; c < d; ++c) v.offset += normal[static_cast<std::size_t>(c)] * support[0][static_cast<std::size_t>(c)].value;
            double worst = 0.0, scale = 1.0;
            for (const auto& x : support) {
              double proj = 0.0;
              for (int c = 0; c < d; ++c) {
                proj += normal[static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)].value;
                scale = std::max(scale, std::abs(x[static_cast<std::size_t>(c)].value));
              }
              worst = std::max(worst, std::abs(proj - v.offset));
            }
            if (worst > kExactTolerance * scale) {
              v.verdict = Verdict::Unresolved;
              v.evidence = "normal direction failed certification";
              return v;
            }
            v.verdict = Verdict::SemiLattice;
            v.evidence = "support spans an affine subspace of dimension " + std::to_string(rank) +
                         " < " + std::to_string(d) + "; projection onto the normal is constant (span 0)";
            return v;
          }

          long long tried = 0;
          constexpr long long kCandidateCap = 2000000;
          for (int h = 1; h <= options.height_bound; ++h) {
            for (const auto& t : directions_of_height(d, h)) {
              if (++tried > kCandidateCap) break;
              const auto projected = project(support, t);
              const std::vector<double> probs(projected.size(), 1.0 / static_cast<double>(projected.size()));
              const auto v1 = lattice_check_1d(projected, probs, options);
              if (v1.verdict != Verdict::Lattice) continue;
              LatticeVerdict v;
              v.verdict = Verdict::SemiLattice;
              v.direction.assign(t.begin(), t.end());
              v.offset = v1.offset;
              v.span = v1.span;
              std::string dir;
              for (std::size_t i = 0; i < t.size(); ++i) dir += (i ? "," : "") + std::to_string(t[i]);
              v.evidence = "direction (" + dir + ") after " + std::to_string(tried) + " candidates; " + v1.evidence;
              return v;
            }
          }
          LatticeVerdict v;
          v.verdict = Verdict::Unresolved;
          v.evidence = "no lattice direction among " + std::to_string(tried) + " integer candidates of height <= " +
                       std::to_string(options.height_bound);
          return v;
        } else if constexpr (std::is_same_v<T, LinearImage>) {
          if (k.coeffs.empty()) fail(ErrorCode::IllegalParameter, "linear image needs coefficients");
          if (!k.base.is_continuous()) fail(ErrorCode::IllegalParameter, "linear image base law must be continuous");
          const auto d = k.coeffs.size();
          LatticeVerdict v;
          const auto zero = std::find(k.coeffs.begin(), k.coeffs.end(), 0.0);
          if (zero != k.coeffs.end()) {
            v.direction.assign(d, 0.0);
            v.direction[static_cast<std::size_t>(zero - k.coeffs.begin())] = 1.0;
          } else if (d == 1) {
            v.verdict = Verdict::NonLattice;
            v.evidence = "nonzero multiple of a continuous law";
            return v;
          } else {
            v.direction.assign(d, 0.0);
            v.direction[0] = -k.coeffs[1];
            v.direction[1] = k.coeffs[0];
          }
          double dot = 0.0;
          for (std::size_t i = 0; i < d; ++i) dot += v.direction[i] * k.coeffs[i];
          if (std::abs(dot) > kExactTolerance) {
            v.verdict = Verdict::Unresolved;
            v.evidence = "normal direction failed certification";
            return v;
          }
          v.verdict = Verdict::SemiLattice;
          v.evidence = "t* is orthogonal to the coefficient vector, so t*.X = 0 almost surely (span 0)";
          return v;
        } else {
          if (!(k.p > 0.0 && k.p <= 1.0)) fail(ErrorCode::IllegalParameter, "gate probability must lie in (0, 1]");
          LatticeVerdict v;
          v.verdict = Verdict::SemiLattice;
          v.direction = {0.0, 1.0};
          v.offset = 0.0;
          v.span = 1.0;
          v.evidence = "t* = (0,1) projects (YT, T) onto T, which lies in {0, 1}";
          return v;
        }
      },
      s.kind);
}

// ---------------------------------------------------------------- characteristic functions

namespace {

std::complex<double> support_cf(const SupportSpec& s, std::span<const double> t) {
  using namespace std::complex_literals;
  if (static_cast<int>(t.size()) != s.dimension()) fail(ErrorCode::IllegalParameter, "argument dimension mismatch");
  return std::visit(
      [&](const auto& k) -> std::complex<double> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Atoms1D>) {
          std::vector<std::vector<double>> pts;
          for (const auto& a : k.atoms) pts.push_back({a.value});
          return atoms_cf(pts, k.probs, t);
        } else if constexpr (std::is_same_v<T, AtomsND>) {
          std::vector<std::vector<double>> pts;
          for (const auto& x : k.vectors) {
            std::vector<double> row;
            for (const auto& a : x) row.push_back(a.value);
            pts.push_back(std::move(row));
          }
          return atoms_cf(pts, k.probs, t);
        } else if constexpr (std::is_same_v<T, LinearImage>) {
          double dot = 0.0;
          for (std::size_t i = 0; i < t.size(); ++i) dot += t[i] * k.coeffs[i];
          return characteristic_function(k.base, dot);
        } else {
          return (1.0 - k.p) + k.p * std::exp(1i * t[1]) * characteristic_function(k.inner, t[0]);
        }
      },
      s.kind);
}

std::complex<double> law_cf(const Law& law, std::span<const double> t) {
  if (const auto* s = std::get_if<SupportSpec>(&law)) return support_cf(*s, t);
  if (t.size() != 1) fail(ErrorCode::IllegalParameter, "scalar law needs a 1-D argument");
  return characteristic_function(std::get<DistributionSpec>(law), t[0]);
}

// Lattice span of t*.X when it can be read off the law.
std::optional<double> infer_span(const Law& law, std::span<const double> direction) {
  std::vector<Atom> projected;
  std::vector<double> probs;
  if (const auto* d = std::get_if<DistributionSpec>(&law)) {
    const auto* discrete = std::get_if<FiniteDiscrete>(&d->params());
    if (!discrete) return std::nullopt;
    for (double a : discrete->atoms) projected.push_back(Atom::approx(direction[0] * a));
    probs = discrete->probs;
  } else {
    const auto& s = std::get<SupportSpec>(law);
    if (const auto* a1 = std::get_if<Atoms1D>(&s.kind)) {
      const double t = direction[0];
      const bool integral = t == std::round(t);
      for (const auto& a : a1->atoms) {
        projected.push_back(integral && a.exact ? Atom::of(*a.exact * Rational(static_cast<long long>(t)))
                                                : Atom::approx(t * a.value));
      }
      probs = a1->probs;
    } else if (const auto* an = std::get_if<AtomsND>(&s.kind)) {
      const bool integral = std::all_of(direction.begin(), direction.end(), [](double c) { return c == std::round(c); });
      if (integral) {
        std::vector<long long> t(direction.size());
        std::transform(direction.begin(), direction.end(), t.begin(), [](double c) { return static_cast<long long>(c); });
        projected = project(an->vectors, t);
      } else {
        for (const auto& x : an->vectors) {
          double acc = 0.0;
          for (std::size_t c = 0; c < direction.size(); ++c) acc += direction[c] * x[c].value;
          projected.push_back(Atom::approx(acc));
        }
      }
      probs = an->probs;
    } else if (std::holds_alternative<BernoulliGated>(s.kind)) {
      if (direction[0] != 0.0 || direction[1] == 0.0) return std::nullopt;
      return std::abs(direction[1]);
    } else {
      return std::nullopt;
    }
  }
  const auto v = lattice_check_1d(projected, probs);
  if (v.verdict == Verdict::Lattice && v.span > 0.0) return v.span;
  return std::nullopt;
}

}  // namespace

double char_fn_modulus(const Law& law, std::span<const double> t) { return std::abs(law_cf(law, t)); }

ScanReport cramer_scan(const Law& law, std::span<const double> direction, double r_max, double step,
                       std::optional<double> span) {
  if (direction.empty() || std::all_of(direction.begin(), direction.end(), [](double c) { return c == 0.0; })) {
    fail(ErrorCode::IllegalParameter, "scan direction must be nonzero");
  }
  if (!(r_max > 0.0) || !(step > 0.0)) fail(ErrorCode::IllegalParameter, "scan needs r_max > 0 and step > 0");
  if (span && !(*span >= 0.0)) fail(ErrorCode::IllegalParameter, "span must be nonnegative");

  ScanReport report;
  report.span = span ? span : infer_span(law, direction);
  const std::vector<double> dir = as_vector(direction);
  auto modulus_at = [&](double r) {
    std::vector<double> t(dir.size());
    for (std::size_t c = 0; c < dir.size(); ++c) t[c] = r * dir[c];
    return std::abs(law_cf(law, t));
  };

  const double r_lo = r_max / 2.0;
  std::vector<double> rs;
  const auto count = static_cast<long>(std::floor((r_max - r_lo) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) rs.push_back(r_lo + static_cast<double>(i) * step);
  const std::size_t grid_count = rs.size();
  std::optional<double> period;
  if (report.span && *report.span > 0.0) {
    period = 2.0 * std::numbers::pi / *report.span;
    constexpr long kMaxResonances = 100000;
    const auto first = static_cast<long>(std::ceil(r_lo / *period));
    const auto last = static_cast<long>(std::floor(r_max / *period));
    for (long m = std::max(first, 1L); m <= last && m - first < kMaxResonances; ++m) {
      rs.push_back(static_cast<double>(m) * *period);
    }
  }

  std::vector<double> values(rs.size());
  std::vector<double> shifted(period ? grid_count : 0);
  const auto total = static_cast<std::ptrdiff_t>(rs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    values[idx] = modulus_at(rs[idx]);
    if (period && idx < grid_count) shifted[idx] = modulus_at(rs[idx] + *period);
  }

  report.samples = rs.size();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (values[i] > report.max_tail_modulus) {
      report.max_tail_modulus = values[i];
      report.argmax_r = rs[i];
    }
  }
  report.semilattice_certified = report.max_tail_modulus >= 1.0 - kUnitModulusTolerance && report.argmax_r != 0.0;
  if (period) {
    for (std::size_t i = 0; i < grid_count; ++i) {
      report.period_deviation = std::max(report.period_deviation, std::abs(values[i] - shifted[i]));
    }
    if (report.period_deviation <= kPeriodTolerance) report.detected_period = period;
  }
  std::ostringstream ev;
  ev << "max |psi(r t*)| on [" << r_lo << ", " << r_max << "] = " << format(report.max_tail_modulus) << " at r = "
     << format(report.argmax_r);
  if (period) {
    ev << "; period 2pi/" << format(*report.span) << (report.detected_period ? " confirmed" : " rejected")
       << " (max deviation " << report.period_deviation << ")";
  }
  if (report.semilattice_certified) ev << "; unit modulus away from 0 certifies a semi-lattice law";
  report.evidence = ev.str();
  return report;
}

}  // namespace bwedge
