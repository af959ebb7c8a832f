#include "rsbound/dists.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "rsbound/errors.hpp"

namespace rsbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) throw DomainError(std::string(what) + " must be positive and finite");
}

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("lattice: no atoms");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.prob)) throw DomainError("lattice: non-finite atom");
    if (a.prob < 0.0) throw DomainError("lattice: negative probability");
    total += a.prob;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw DomainError("lattice: probabilities do not sum to 1");
  for (Atom& a : atoms) a.prob /= total;

  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (a.prob == 0.0) continue;
    if (!merged.empty() &&
        std::fabs(merged.back().value - a.value) <= 1e-12 * std::max(1.0, std::fabs(a.value))) {
      merged.back().prob += a.prob;
    } else {
      merged.push_back(a);
    }
  }

  double mean = 0.0;
  for (const Atom& a : merged) mean += a.value * a.prob;
  if (std::fabs(mean) > 1e-9) throw DomainError("lattice: mean is not zero");
  if (std::fabs(mean) > 1e-12) {
    for (Atom& a : merged) a.value -= mean;
  }
  return merged;
}

double atoms_variance(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.value * a.value * a.prob;
  return s;
}

std::string format_param(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

SummandDistribution::SummandDistribution(Family family, std::vector<Atom> atoms)
    : family_(std::move(family)), atoms_(std::move(atoms)) {
  if (!atoms_.empty()) {
    double c = 0.0;
    for (const Atom& a : atoms_) {
      c += a.prob;
      cumulative_.push_back(c);
    }
    cumulative_.back() = 1.0;
    sigma2_ = atoms_variance(atoms_);
  } else if (const auto* u = std::get_if<UniformSymmetric>(&family_)) {
    sigma2_ = u->halfwidth * u->halfwidth / 3.0;
  } else {
    const auto& p = std::get<SymmetricPareto>(family_);
    sigma2_ = p.tail_index * p.scale * p.scale / (p.tail_index - 2.0);
  }
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) throw DomainError("summand variance must be positive and finite");
}

SummandDistribution SummandDistribution::rademacher() {
  return SummandDistribution(Rademacher{}, {{-1.0, 0.5}, {1.0, 0.5}});
}

SummandDistribution SummandDistribution::uniform(double halfwidth) {
  require_positive(halfwidth, "uniform halfwidth");
  return SummandDistribution(UniformSymmetric{halfwidth}, {});
}

SummandDistribution SummandDistribution::two_point(double scale) {
  require_positive(scale, "two-point scale");
  return SummandDistribution(TwoPointSymmetric{scale}, {{-scale, 0.5}, {scale, 0.5}});
}

SummandDistribution SummandDistribution::pareto(double tail_index, double scale) {
  require_positive(scale, "pareto scale");
  if (!std::isfinite(tail_index) || tail_index <= 2.0) {
    throw DomainError("pareto tail index must exceed 2 for a finite variance");
  }
  return SummandDistribution(SymmetricPareto{tail_index, scale}, {});
}

SummandDistribution SummandDistribution::lattice(std::vector<Atom> atoms) {
  auto merged = normalize_atoms(std::move(atoms));
  return SummandDistribution(FiniteLattice{merged}, merged);
}

SummandDistribution SummandDistribution::parse_lattice_csv(std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto sep = line.find_first_of(",;\t");
    double value = 0.0;
    double prob = 0.0;
    const bool ok = sep != std::string::npos && parse_double(std::string_view(line).substr(0, sep), value) &&
                    parse_double(std::string_view(line).substr(sep + 1), prob);
    if (!ok) {
      if (!seen_data && atoms.empty()) {
        seen_data = true;  // header line
        continue;
      }
      throw UsageError("lattice csv: cannot parse line " + std::to_string(line_no));
    }
    seen_data = true;
    atoms.push_back({value, prob});
  }
  return lattice(std::move(atoms));
}

SummandDistribution SummandDistribution::load_lattice_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("lattice csv: cannot open " + path.string());
  return parse_lattice_csv(in);
}

bool SummandDistribution::is_symmetric() const {
  if (!is_discrete()) return true;
  const std::size_t n = atoms_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& lo = atoms_[i];
    const Atom& hi = atoms_[n - 1 - i];
    const double scale = std::max(1.0, std::fabs(lo.value));
    if (std::fabs(lo.value + hi.value) > 1e-12 * scale || std::fabs(lo.prob - hi.prob) > 1e-12) return false;
  }
  return true;
}

std::span<const Atom> SummandDistribution::atoms() const {
  if (!is_discrete()) throw UnsupportedError("distribution " + label() + " has no finite atom list");
  return atoms_;
}

SummandDistribution SummandDistribution::scaled(double c) const {
  require_positive(c, "scale factor");
  return std::visit(
      Overloaded{
          [&](const FiniteLattice& l) {
            std::vector<Atom> a = l.atoms;
            for (Atom& x : a) x.value *= c;
            return lattice(std::move(a));
          },
          [&](const Rademacher&) { return two_point(c); },
          [&](const UniformSymmetric& u) { return uniform(u.halfwidth * c); },
          [&](const TwoPointSymmetric& t) { return two_point(t.scale * c); },
          [&](const SymmetricPareto& p) { return pareto(p.tail_index, p.scale * c); },
      },
      family_);
}

std::string SummandDistribution::label() const {
  return std::visit(
      Overloaded{
          [](const FiniteLattice& l) { return "lattice(" + std::to_string(l.atoms.size()) + " atoms)"; },
          [](const Rademacher&) { return std::string("rademacher"); },
          [](const UniformSymmetric& u) { return "uniform(a=" + format_param(u.halfwidth) + ")"; },
          [](const TwoPointSymmetric& t) { return "two_point(s=" + format_param(t.scale) + ")"; },
          [](const SymmetricPareto& p) {
            return "pareto(alpha=" + format_param(p.tail_index) + ",s=" + format_param(p.scale) + ")";
          },
      },
      family_);
}

double SummandDistribution::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (is_discrete()) {
    const double u = unit(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
    return atoms_[idx].value;
  }
  if (const auto* u = std::get_if<UniformSymmetric>(&family_)) {
    return u->halfwidth * (2.0 * unit(rng) - 1.0);
  }
  const auto& p = std::get<SymmetricPareto>(family_);
  const double magnitude = p.scale * std::pow(1.0 - unit(rng), -1.0 / p.tail_index);
  return unit(rng) < 0.5 ? -magnitude : magnitude;
}

double variance(const SummandDistribution& d) { return d.variance(); }

double trunc_second_moment_tail(const SummandDistribution& d, double t) {
  if (!(t > 0.0)) throw DomainError("truncation level must be positive");
  if (d.is_discrete()) {
    double s = 0.0;
    for (const Atom& a : d.atoms()) {
      if (in_tail(std::fabs(a.value), t)) s += a.value * a.value * a.prob;
    }
    return s;
  }
  if (const auto* u = std::get_if<UniformSymmetric>(&d.family())) {
    const double a = u->halfwidth;
    return t >= a ? 0.0 : (a * a * a - t * t * t) / (3.0 * a);
  }
  const auto& p = std::get<SymmetricPareto>(d.family());
  if (t <= p.scale) return d.variance();
  const double alpha = p.tail_index;
  return alpha * std::pow(p.scale, alpha) * std::pow(t, 2.0 - alpha) / (alpha - 2.0);
}

double trunc_second_moment_core(const SummandDistribution& d, double t) {
  if (!(t > 0.0)) throw DomainError("truncation level must be positive");
  if (d.is_discrete()) {
    double s = 0.0;
    for (const Atom& a : d.atoms()) {
      if (!in_tail(std::fabs(a.value), t)) s += a.value * a.value * a.prob;
    }
    return s;
  }
  if (const auto* u = std::get_if<UniformSymmetric>(&d.family())) {
    const double a = u->halfwidth;
    return t >= a ? a * a / 3.0 : t * t * t / (3.0 * a);
  }
  const auto& p = std::get<SymmetricPareto>(d.family());
  if (t <= p.scale) return 0.0;
  const double alpha = p.tail_index;
  return d.variance() * (1.0 - std::pow(p.scale / t, alpha - 2.0));
}

double trunc_third_abs_moment_core(const SummandDistribution& d, double t) {
  if (!(t > 0.0)) throw DomainError("truncation level must be positive");
  if (d.is_discrete()) {
    double s = 0.0;
    for (const Atom& a : d.atoms()) {
      const double v = std::fabs(a.value);
      if (!in_tail(v, t)) s += v * v * v * a.prob;
    }
    return s;
  }
  if (const auto* u = std::get_if<UniformSymmetric>(&d.family())) {
    const double a = u->halfwidth;
    const double c = std::min(t, a);
    return c * c * c * c / (4.0 * a);
  }
  const auto& p = std::get<SymmetricPareto>(d.family());
  if (t <= p.scale) return 0.0;
  const double alpha = p.tail_index;
  const double s = p.scale;
  if (std::fabs(alpha - 3.0) < 1e-12) return alpha * s * s * s * std::log(t / s);
  return alpha * std::pow(s, alpha) * (std::pow(t, 3.0 - alpha) - std::pow(s, 3.0 - alpha)) / (3.0 - alpha);
}

double third_abs_moment(const SummandDistribution& d) {
  if (d.is_discrete()) {
    double s = 0.0;
    for (const Atom& a : d.atoms()) s += std::pow(std::fabs(a.value), 3) * a.prob;
    return s;
  }
  if (const auto* u = std::get_if<UniformSymmetric>(&d.family())) {
    return std::pow(u->halfwidth, 3) / 4.0;
  }
  const auto& p = std::get<SymmetricPareto>(d.family());
  if (p.tail_index <= 3.0) return kInf;
  return p.tail_index * std::pow(p.scale, 3) / (p.tail_index - 3.0);
}

// --- growth functions -------------------------------------------------------

GrowthFunction GrowthFunction::abs() {
  return GrowthFunction([](double x) { return std::fabs(x); }, "abs");
}

GrowthFunction GrowthFunction::min_abs(double cap) {
  require_positive(cap, "min_abs cap");
  return GrowthFunction([cap](double x) { return std::min(std::fabs(x), cap); },
                        "min_abs:" + format_param(cap));
}

GrowthFunction GrowthFunction::power(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("power growth exponent must lie in (0, 1]");
  return GrowthFunction([delta](double x) { return std::pow(std::fabs(x), delta); },
                        "power:" + format_param(delta));
}

GrowthFunction GrowthFunction::square() {
  return GrowthFunction([](double x) { return x * x; }, "square");
}

GrowthFunction GrowthFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  double param = 0.0;
  const bool has_param = colon != std::string::npos;
  if (has_param && !parse_double(std::string_view(spec).substr(colon + 1), param)) {
    throw UsageError("growth function: bad parameter in '" + spec + "'");
  }
  if (name == "abs" && !has_param) return abs();
  if (name == "square" && !has_param) return square();
  if (name == "min_abs" && has_param) return min_abs(param);
  if (name == "power" && has_param) return power(param);
  throw UsageError("growth function: unknown '" + spec + "' (abs, min_abs:C, power:D, square)");
}

double weighted_second_moment(const SummandDistribution& d, const GrowthFunction& g) {
  if (const auto* p = std::get_if<SymmetricPareto>(&d.family())) {
    // Integrand ~ x^{1-alpha} g(x); estimate g's power-law order far out.
    const double x1 = p->scale * 1e10;
    const double x2 = p->scale * 1e12;
    const double g1 = g(x1);
    const double g2 = g(x2);
    if (!std::isfinite(g2)) return kInf;
    const double order = (g1 > 0.0 && g2 > 0.0) ? std::log(g2 / g1) / std::log(100.0) : 0.0;
    if (order >= p->tail_index - 2.0 - 1e-6) return kInf;
  }
  return d.expect([&](double x) { return x * x * g(x); }, 1e-12);
}

std::vector<double> default_growth_grid() {
  std::vector<double> grid(200);
  for (int i = 0; i < 200; ++i) grid[i] = std::pow(10.0, -6.0 + 12.0 * i / 199.0);
  return grid;
}

GrowthCheck verify_growth_function(const GrowthFunction& g, std::span<const double> grid) {
  if (grid.empty()) throw UsageError("growth check: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw UsageError("growth check: grid points must be positive");
    if (i > 0 && grid[i] < grid[i - 1]) throw UsageError("growth check: grid must be sorted ascending");
  }
  std::vector<double> points(grid.begin(), grid.end());
  const auto extra = default_growth_grid();
  points.insert(points.end(), extra.begin(), extra.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto fail = [](std::string what, double at) { return GrowthCheck{false, std::move(what), at}; };
  constexpr double kRel = 1e-12;

  const double g0 = g(0.0);
  if (!(g0 >= 0.0)) return fail("g(0) is negative", 0.0);

  double prev_g = 0.0;
  double prev_ratio = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    const double gx = g(x);
    if (!std::isfinite(gx)) return fail("g is not finite", x);
    if (!(gx > 0.0)) return fail("g(x) is not positive for x > 0", x);
    if (std::fabs(g(-x) - gx) > kRel * gx) return fail("g is not even", x);
    const double ratio = x / gx;
    if (i > 0) {
      if (gx < prev_g * (1.0 - kRel)) return fail("g decreases", x);
      if (ratio < prev_ratio * (1.0 - kRel)) return fail("x/g(x) decreases", x);
    }
    prev_g = gx;
    prev_ratio = ratio;
  }
  return {};
}

}  // namespace rsbound
