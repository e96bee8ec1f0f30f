#include "dwlab/spectral.hpp"

#include "dwlab/fft.hpp"

#include <vector>

namespace dwlab {

RealField::RealField(const Grid& g, Eigen::ArrayXd v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("RealField: value count does not match grid");
  }
}

SpectralField::SpectralField(const Grid& g, Eigen::ArrayXcd c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) {
    throw std::invalid_argument("SpectralField: coefficient count does not match grid");
  }
}

Eigen::Index mirror_index(const Grid& grid, Eigen::Index linear) {
  const int n = grid.points();
  Eigen::Index out = 0;
  for (int a = 0; a < grid.dim(); ++a) {
    const int j = grid.axis_index(linear, a);
    out = out * n + (j == 0 ? 0 : n - j);
  }
  return out;
}

double conjugate_symmetry_defect(const SpectralField& f) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) {
    if (f.grid.is_nyquist(i)) continue;
    const Eigen::Index j = mirror_index(f.grid, i);
    worst = std::max(worst, std::abs(f.coeffs[i] - std::conj(f.coeffs[j])));
  }
  return worst;
}

RealField operator*(double a, const RealField& f) { return RealField(f.grid, a * f.values); }

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid, "RealField +");
  return RealField(a.grid, a.values + b.values);
}

SpectralField operator*(double a, const SpectralField& f) {
  return SpectralField(f.grid, a * f.coeffs);
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "SpectralField +");
  return SpectralField(a.grid, a.coeffs + b.coeffs);
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "SpectralField -");
  return SpectralField(a.grid, a.coeffs - b.coeffs);
}

SpectralField to_spectral(const RealField& f) {
  Eigen::ArrayXcd data = f.values.cast<Complex>();
  fft::transform(f.grid, data, -1);
  data /= static_cast<double>(f.grid.size());
  return SpectralField(f.grid, std::move(data));
}

RealField from_spectral(const SpectralField& f) {
  Eigen::ArrayXcd data = f.coeffs;
  fft::transform(f.grid, data, +1);
  return RealField(f.grid, data.real());
}

namespace {

// Linear index on the padded grid holding the same wavenumber as `linear` on
// the coarse grid.
Eigen::Index padded_index(const Grid& coarse, const Grid& fine, Eigen::Index linear) {
  const int nf = fine.points();
  Eigen::Index out = 0;
  for (int a = 0; a < coarse.dim(); ++a) {
    const int k = coarse.signed_index(coarse.axis_index(linear, a));
    out = out * nf + (k >= 0 ? k : nf + k);
  }
  return out;
}

}  // namespace

namespace {

struct PaddingLayout {
  int dim = 0;
  int points = 0;
  std::vector<Eigen::Index> to_fine;        // coarse mode -> padded mode
  std::vector<char> nyquist;                // coarse mode is a Nyquist mode
  std::vector<Eigen::Index> coarse_points;  // padded points that are coarse points
};

const PaddingLayout& padding_layout(const Grid& coarse, const Grid& fine) {
  thread_local PaddingLayout layout;
  if (layout.dim == coarse.dim() && layout.points == coarse.points()) return layout;
  layout.dim = coarse.dim();
  layout.points = coarse.points();
  layout.to_fine.resize(static_cast<size_t>(coarse.size()));
  layout.nyquist.resize(static_cast<size_t>(coarse.size()));
  for (Eigen::Index i = 0; i < coarse.size(); ++i) {
    layout.to_fine[i] = padded_index(coarse, fine, i);
    layout.nyquist[i] = coarse.is_nyquist(i) ? 1 : 0;
  }
  layout.coarse_points.clear();
  for (Eigen::Index i = 0; i < fine.size(); ++i) {
    bool even = true;
    for (int a = 0; a < fine.dim(); ++a) even = even && fine.axis_index(i, a) % 2 == 0;
    if (even) layout.coarse_points.push_back(i);
  }
  return layout;
}

inline double abs_power(double v, double p) {
  if (p == 2.0) return v * v;
  if (p == 3.0) return std::abs(v) * v * v;
  if (p == 4.0) return (v * v) * (v * v);
  return std::pow(v * v, 0.5 * p);
}

}  // namespace

PowerResult power_dealiased_spectral(const SpectralField& u, double p) {
  const Grid& coarse = u.grid;
  const Grid fine = coarse.refined();
  const PaddingLayout& layout = padding_layout(coarse, fine);

  Eigen::ArrayXcd padded = Eigen::ArrayXcd::Zero(fine.size());
  for (Eigen::Index i = 0; i < coarse.size(); ++i) padded[layout.to_fine[i]] = u.coeffs[i];
  fft::transform(fine, padded, +1);

  PowerResult result{SpectralField(coarse), 0.0, true};
  double sup = 0.0;
  for (Eigen::Index i : layout.coarse_points) sup = std::max(sup, std::abs(padded[i].real()));
  for (Eigen::Index i = 0; i < fine.size(); ++i) padded[i] = abs_power(padded[i].real(), p);
  result.sup_norm = sup;

  fft::transform(fine, padded, -1);
  const double scale = 1.0 / static_cast<double>(fine.size());
  for (Eigen::Index i = 0; i < coarse.size(); ++i) {
    result.power.coeffs[i] = layout.nyquist[i] ? Complex(0.0) : padded[layout.to_fine[i]] * scale;
  }
  result.finite = std::isfinite(sup) && result.power.all_finite();
  return result;
}

RealField power_dealiased(const RealField& u, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("power_dealiased: exponent must exceed 1");
  return from_spectral(power_dealiased_spectral(to_spectral(u), p).power);
}

RealField interpolate(const SpectralField& f, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0) {
    throw std::invalid_argument("interpolate: factor must be a power of two");
  }
  if (factor == 1) return from_spectral(f);
  const Grid fine(f.grid.dim(), f.grid.points() * factor, f.grid.box_length());
  SpectralField out(fine);
  for (Eigen::Index i = 0; i < f.grid.size(); ++i) {
    if (!f.grid.is_nyquist(i)) out.coeffs[padded_index(f.grid, fine, i)] = f.coeffs[i];
  }
  return from_spectral(out);
}

double spectral_l2_norm(const SpectralField& f) {
  return std::sqrt(f.grid.volume() * f.coeffs.abs2().sum());
}

}  // namespace dwlab
