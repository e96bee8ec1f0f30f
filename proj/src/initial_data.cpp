#include "dwlab/initial_data.hpp"

#include "dwlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwlab {

DataKind parse_data_kind(std::string_view name) {
  if (name == "gaussian") return DataKind::gaussian;
  if (name == "theorem2_profile") return DataKind::theorem2_profile;
  if (name == "lowfreq_weighted") return DataKind::lowfreq_weighted;
  if (name == "bump") return DataKind::bump;
  throw std::invalid_argument("unknown data kind '" + std::string(name) + "'");
}

std::string_view to_string(DataKind kind) {
  switch (kind) {
    case DataKind::gaussian: return "gaussian";
    case DataKind::theorem2_profile: return "theorem2_profile";
    case DataKind::lowfreq_weighted: return "lowfreq_weighted";
    case DataKind::bump: return "bump";
  }
  return "?";
}

void DataSpec::validate() const {
  if (!(width > 0.0)) throw std::invalid_argument("DataSpec: width must be positive");
  if (!(lowfreq_power >= 0.0)) throw std::invalid_argument("DataSpec: lowfreq_power must be >= 0");
  if (!(amplitude_c0 > 0.0)) throw std::invalid_argument("DataSpec: amplitude_c0 must be positive");
}

double DataSpec::support_radius() const {
  switch (kind) {
    // exp(-r^2/w^2) = 1e-8
    case DataKind::gaussian: return width * std::sqrt(8.0 * std::numbers::ln10);
    case DataKind::bump: return width;
    // spectral envelope exp(-xi^2 w^2); the physical profile is Gaussian-like
    // only for lowfreq_power = 0, so this is a nominal radius.
    case DataKind::lowfreq_weighted: return width * std::sqrt(8.0 * std::numbers::ln10);
    case DataKind::theorem2_profile: return kInfinity;
  }
  return kInfinity;
}

Eigen::ArrayXd periodic_distance(const Grid& grid, const std::vector<double>& center) {
  if (!center.empty() && static_cast<int>(center.size()) != grid.dim()) {
    throw std::invalid_argument("center has " + std::to_string(center.size()) +
                                " components for a " + std::to_string(grid.dim()) + "-d grid");
  }
  const double L = grid.box_length();
  Eigen::ArrayXd r2 = Eigen::ArrayXd::Zero(grid.size());
  for (int a = 0; a < grid.dim(); ++a) {
    const double c = center.empty() ? 0.0 : center[a];
    Eigen::ArrayXd d = grid.coordinate(a) - c;
    d = d - L * (d / L).round();
    r2 += d.square();
  }
  return r2.sqrt();
}

namespace {

void normalize_l2(RealField& f) {
  const double norm = lp_norm(f, 2.0);
  if (norm > 0.0) f.values /= norm;
}

}  // namespace

InitialData generate(const DataSpec& spec, const ModelParams& params, const Grid& grid) {
  spec.validate();
  InitialData data{RealField(grid), RealField(grid), {}};
  const Eigen::ArrayXd r = periodic_distance(grid, spec.center);
  const double half_box = 0.5 * grid.box_length();

  if ((spec.kind == DataKind::gaussian || spec.kind == DataKind::bump) &&
      spec.support_radius() > half_box) {
    data.warnings.push_back("profile exceeds 1e-8 of its peak at the box boundary");
  }

  switch (spec.kind) {
    case DataKind::gaussian: {
      data.u0.values = (-(r / spec.width).square()).exp();
      normalize_l2(data.u0);
      break;
    }
    case DataKind::bump: {
      const Eigen::ArrayXd q = (r / spec.width).square();
      data.u0.values = (q < 1.0).select((1.0 - 1.0 / (1.0 - q.min(1.0 - 1e-300))).exp(), 0.0);
      normalize_l2(data.u0);
      break;
    }
    case DataKind::theorem2_profile: {
      const double decay = params.n / params.m + params.gamma;
      const Eigen::ArrayXd bracket = (1.0 + r.square()).sqrt();
      data.u0.values = 0.5 * spec.amplitude_c0 * bracket.pow(-decay) /
                       (std::numbers::e + r).log();
      data.u1.values = data.u0.values;
      data.warnings.push_back("theorem2_profile is periodized; its Hdot^{-gamma}_m norm depends on the box");
      break;
    }
    case DataKind::lowfreq_weighted: {
      SpectralField hat(grid);
      const auto& xi = grid.xi_abs();
      std::vector<double> c(grid.dim(), 0.0);
      if (!spec.center.empty()) c = spec.center;
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (xi[i] == 0.0 || grid.is_nyquist(i)) continue;
        double phase = 0.0;
        for (int a = 0; a < grid.dim(); ++a) phase += grid.wavenumber(grid.axis_index(i, a)) * c[a];
        const double env = std::pow(xi[i], spec.lowfreq_power) * std::exp(-xi[i] * xi[i] * spec.width * spec.width);
        hat.coeffs[i] = env * std::polar(1.0, -phase);
      }
      data.u0 = from_spectral(hat);
      normalize_l2(data.u0);
      break;
    }
  }
  return data;
}

}  // namespace dwlab
