#include "cmlab/manifold.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cmlab/error.hpp"
#include "cmlab/special.hpp"

namespace cmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

struct LatticeVector {
  std::array<int, 4> k{};
  long norm2 = 0;
};

bool half_lattice_positive(const std::array<int, 4>& k, int d) {
  for (int i = 0; i < d; ++i) {
    if (k[i] != 0) return k[i] > 0;
  }
  return false;
}

// All k with first nonzero entry positive and |k|_inf <= radius, plus k = 0.
std::vector<LatticeVector> half_lattice_box(int d, int radius) {
  std::vector<LatticeVector> out;
  std::array<int, 4> k{};
  for (int i = 0; i < d; ++i) k[i] = -radius;
  for (;;) {
    const bool zero = std::all_of(k.begin(), k.begin() + d, [](int v) { return v == 0; });
    if (zero || half_lattice_positive(k, d)) {
      LatticeVector v;
      v.k = k;
      for (int i = 0; i < d; ++i) v.norm2 += static_cast<long>(k[i]) * k[i];
      out.push_back(v);
    }
    int axis = d - 1;
    while (axis >= 0 && k[axis] == radius) {
      k[axis] = -radius;
      --axis;
    }
    if (axis < 0) break;
    ++k[axis];
  }
  return out;
}

std::vector<EigenPair> enumerate_torus(int d, std::size_t count) {
  for (int radius = 1;; radius *= 2) {
    auto box = half_lattice_box(d, radius);
    const long limit = static_cast<long>(radius) * radius;
    std::erase_if(box, [&](const LatticeVector& v) { return v.norm2 > limit; });
    const std::size_t available = 2 * box.size() - 1;
    if (available < count) continue;

    std::sort(box.begin(), box.end(), [&](const LatticeVector& a, const LatticeVector& b) {
      if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
      return std::lexicographical_compare(a.k.begin(), a.k.begin() + d, b.k.begin(),
                                          b.k.begin() + d);
    });
    std::vector<EigenPair> pairs;
    pairs.reserve(count);
    for (const auto& v : box) {
      const double lambda = kTwoPi * std::sqrt(static_cast<double>(v.norm2));
      for (int part = 0; part < (v.norm2 == 0 ? 1 : 2); ++part) {
        if (pairs.size() == count) return pairs;
        pairs.push_back(EigenPair{pairs.size(), lambda, TorusLabel{v.k, part == 1}});
      }
    }
    return pairs;
  }
}

std::vector<EigenPair> enumerate_sphere(std::size_t count) {
  std::vector<EigenPair> pairs;
  pairs.reserve(count);
  for (int l = 0; pairs.size() < count; ++l) {
    const double lambda = std::sqrt(static_cast<double>(l) * (l + 1));
    for (int slot = 0; slot <= 2 * l && pairs.size() < count; ++slot) {
      // slot 0 zonal, then (cos m, sin m) for m = 1..l; zonal first keeps the
      // product rule's first failure at the start of degree 2 n_theta
      const int m = (slot + 1) / 2;
      const int order = slot == 0 ? 0 : (slot % 2 == 1 ? m : -m);
      pairs.push_back(EigenPair{pairs.size(), lambda, SphereLabel{l, order}});
    }
  }
  return pairs;
}

double torus_phase(const TorusLabel& label, const Point& x, int d) {
  double t = 0.0;
  for (int i = 0; i < d; ++i) t += label.k[i] * x[i];
  t -= std::floor(t);
  return kTwoPi * t;
}

double torus_value(const TorusLabel& label, const Point& x, int d) {
  if (std::all_of(label.k.begin(), label.k.begin() + d, [](int v) { return v == 0; })) {
    return 1.0;
  }
  const double a = torus_phase(label, x, d);
  return kSqrt2 * (label.sine ? std::sin(a) : std::cos(a));
}

struct Polar {
  double cos_theta;
  double sin_theta;
  double phi;
};

Polar to_polar(const Point& x) {
  return Polar{x[2], std::hypot(x[0], x[1]), std::atan2(x[1], x[0])};
}

double harmonic_value(const SphereLabel& label, const LegendreTable& table, double phi) {
  const int m = std::abs(label.order);
  const double p = table(label.degree, m);
  if (label.order == 0) return p;
  return kSqrt2 * p * (label.order > 0 ? std::cos(m * phi) : std::sin(m * phi));
}

}  // namespace

Manifold Manifold::torus(int d) {
  if (d < 1 || d > kMaxTorusDimension) {
    throw unsupported_dimension("torus dimension " + std::to_string(d) +
                                " not in [1, " + std::to_string(kMaxTorusDimension) + "]");
  }
  return Manifold(Kind::Torus, d);
}

Manifold Manifold::circle() { return Manifold(Kind::Circle, 1); }

Manifold Manifold::sphere2() { return Manifold(Kind::Sphere2, 2); }

Manifold Manifold::parse(std::string_view text) {
  if (text == "circle") return circle();
  if (text == "sphere2" || text == "sphere") return sphere2();
  constexpr std::string_view prefix = "torus:";
  if (text.starts_with(prefix)) {
    int d = 0;
    const auto rest = text.substr(prefix.size());
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
    if (ec == std::errc() && ptr == rest.data() + rest.size()) return torus(d);
  }
  throw invalid_argument("unknown manifold '" + std::string(text) +
                         "' (expected torus:<d>, circle or sphere2)");
}

std::string Manifold::name() const {
  switch (kind_) {
    case Kind::Torus:
      return "torus:" + std::to_string(dim_);
    case Kind::Circle:
      return "circle";
    case Kind::Sphere2:
      return "sphere2";
  }
  return {};
}

Point make_point(const Manifold& m, std::span<const double> coords) {
  const auto n = static_cast<std::size_t>(m.chart_size());
  if (coords.size() != n) {
    throw invalid_argument(m.name() + " points need " + std::to_string(n) +
                           " coordinates, got " + std::to_string(coords.size()));
  }
  Point p;
  p.size = static_cast<std::uint8_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(coords[i])) throw invalid_argument("non-finite point coordinate");
    p.coords[i] = coords[i];
  }
  if (m.is_sphere()) {
    const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (!(norm > 0.0)) throw invalid_argument("sphere point must be a nonzero vector");
    for (std::size_t i = 0; i < 3; ++i) p.coords[i] /= norm;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double v = p.coords[i] - std::floor(p.coords[i]);
      if (v >= 1.0) v = 0.0;
      p.coords[i] = v;
    }
  }
  return p;
}

Point torus_point(std::initializer_list<double> coords) {
  const std::vector<double> v(coords);
  return make_point(Manifold::torus(static_cast<int>(v.size())), v);
}

Point sphere_point(double x, double y, double z) {
  const double v[3] = {x, y, z};
  return make_point(Manifold::sphere2(), v);
}

Point sphere_point_polar(double theta, double phi) {
  const double st = std::sin(theta);
  return sphere_point(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

std::string describe(const EigenLabel& label, int dim) {
  std::ostringstream os;
  if (const auto* t = std::get_if<TorusLabel>(&label)) {
    const bool zero = std::all_of(t->k.begin(), t->k.begin() + dim, [](int v) { return v == 0; });
    if (zero) return "const";
    os << (t->sine ? "sin" : "cos") << " k=";
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << t->k[i];
  } else {
    const auto& s = std::get<SphereLabel>(label);
    os << "Y l=" << s.degree << " m=" << s.order;
  }
  return os.str();
}

std::vector<EigenPair> enumerate_spectrum(const Manifold& m, std::size_t count) {
  if (count == 0) throw invalid_argument("enumerate_spectrum needs count >= 1");
  return m.is_sphere() ? enumerate_sphere(count) : enumerate_torus(m.dimension(), count);
}

std::vector<EigenPair> enumerate_below(const Manifold& m, double frequency) {
  std::size_t count = 16;
  for (;;) {
    auto pairs = enumerate_spectrum(m, count);
    if (pairs.back().lambda >= frequency) {
      std::erase_if(pairs, [&](const EigenPair& p) { return p.lambda >= frequency; });
      return pairs;
    }
    count *= 2;
  }
}

double eval_eigenfunction(const Manifold& m, const EigenPair& pair, const Point& x) {
  if (x.size != m.chart_size()) throw invalid_argument("point does not belong to " + m.name());
  if (m.is_sphere()) {
    const auto* label = std::get_if<SphereLabel>(&pair.label);
    if (!label) throw Error("label_mismatch", "torus label used on the sphere");
    const Polar p = to_polar(x);
    const LegendreTable table(label->degree, p.cos_theta, p.sin_theta);
    return harmonic_value(*label, table, p.phi);
  }
  const auto* label = std::get_if<TorusLabel>(&pair.label);
  if (!label) throw Error("label_mismatch", "sphere label used on " + m.name());
  return torus_value(*label, x, m.dimension());
}

Spectrum::Spectrum(Manifold m, std::vector<EigenPair> pairs)
    : manifold_(m), pairs_(std::move(pairs)) {}

std::shared_ptr<const Spectrum> Spectrum::first(const Manifold& m, std::size_t count) {
  return std::make_shared<const Spectrum>(m, enumerate_spectrum(m, count));
}

void Spectrum::evaluate(const Point& x, std::span<double> out) const {
  const std::size_t n = std::min(out.size(), pairs_.size());
  if (manifold_.is_sphere()) {
    const Polar p = to_polar(x);
    const int lmax = n == 0 ? 0 : std::get<SphereLabel>(pairs_[n - 1].label).degree;
    const LegendreTable table(lmax, p.cos_theta, p.sin_theta);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = harmonic_value(std::get<SphereLabel>(pairs_[i].label), table, p.phi);
    }
    return;
  }
  const int d = manifold_.dimension();
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& label = std::get<TorusLabel>(pairs_[i].label);
    if (i == 0) {
      out[i] = 1.0;
      continue;
    }
    // cosine and sine of one frequency are adjacent and share the phase
    if (!label.sine) phase = torus_phase(label, x, d);
    out[i] = kSqrt2 * (label.sine ? std::sin(phase) : std::cos(phase));
  }
}

double geodesic_distance(const Manifold& m, const Point& x, const Point& y) {
  if (m.is_sphere()) {
    const double cx = x[1] * y[2] - x[2] * y[1];
    const double cy = x[2] * y[0] - x[0] * y[2];
    const double cz = x[0] * y[1] - x[1] * y[0];
    const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
  }
  double sum = 0.0;
  for (int i = 0; i < m.dimension(); ++i) {
    double delta = std::abs(x[i] - y[i]);
    delta -= std::floor(delta);
    delta = std::min(delta, 1.0 - delta);
    sum += delta * delta;
  }
  return std::sqrt(sum);
}

WeylCount weyl_counting_check(const Manifold& m, double T) {
  if (!(T >= 1.0)) throw invalid_argument("weyl_counting_check needs T >= 1");
  WeylCount out;
  if (m.is_sphere()) {
    for (long l = 0;; ++l) {
      if (std::sqrt(static_cast<double>(l) * (l + 1)) > T) break;
      out.count += static_cast<std::size_t>(2 * l + 1);
    }
  } else {
    const int d = m.dimension();
    const int radius = static_cast<int>(T / kTwoPi) + 1;
    std::array<int, 4> k{};
    for (int i = 0; i < d; ++i) k[i] = -radius;
    for (;;) {
      long n2 = 0;
      for (int i = 0; i < d; ++i) n2 += static_cast<long>(k[i]) * k[i];
      if (kTwoPi * std::sqrt(static_cast<double>(n2)) <= T) ++out.count;
      int axis = d - 1;
      while (axis >= 0 && k[axis] == radius) {
        k[axis] = -radius;
        --axis;
      }
      if (axis < 0) break;
      ++k[axis];
    }
  }
  out.ratio = static_cast<double>(out.count) / std::pow(T, m.dimension());
  return out;
}

double sup_norm_sanity(const Manifold& m, const EigenPair& pair, int grid_resolution) {
  if (grid_resolution < 64) throw invalid_argument("sup_norm_sanity needs grid_resolution >= 64");
  const int n = grid_resolution;
  double best = 0.0;
  if (m.is_sphere()) {
    for (int i = 0; i < n; ++i) {
      const double theta = std::numbers::pi * i / (n - 1);
      for (int j = 0; j < n; ++j) {
        const double phi = kTwoPi * j / n;
        const Point x = sphere_point_polar(theta, phi);
        best = std::max(best, std::abs(eval_eigenfunction(m, pair, x)));
      }
    }
    return best;
  }
  const int d = m.dimension();
  std::array<int, 4> idx{};
  for (;;) {
    Point x;
    x.size = static_cast<std::uint8_t>(d);
    for (int i = 0; i < d; ++i) x.coords[i] = static_cast<double>(idx[i]) / n;
    best = std::max(best, std::abs(eval_eigenfunction(m, pair, x)));
    int axis = d - 1;
    while (axis >= 0 && idx[axis] == n - 1) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++idx[axis];
  }
  return best;
}

}  // namespace cmlab
