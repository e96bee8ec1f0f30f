#pragma once

#include "dwlab/fields.hpp"
#include "dwlab/norms.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dwlab {

enum class DataKind { gaussian, theorem2_profile, lowfreq_weighted, bump };

DataKind parse_data_kind(std::string_view name);
std::string_view to_string(DataKind kind);

struct DataSpec {
  DataKind kind = DataKind::gaussian;
  std::vector<double> center;  // empty means the origin
  double width = 1.0;
  double lowfreq_power = 0.0;
  double amplitude_c0 = 1.0;

  void validate() const;
  /// Radius beyond which the profile is below 1e-8 of its peak; infinite for
  /// the algebraically decaying profile.
  double support_radius() const;
};

/// Unscaled data pair (eps is applied by the caller).
struct InitialData {
  RealField u0;
  RealField u1;
  std::vector<std::string> warnings;
};

/// Profiles:
///  - gaussian: u0 = exp(-|x-c|^2/w^2) normalized to unit L2, u1 = 0.
///  - bump: u0 = exp(1 - 1/(1 - |x-c|^2/w^2)) inside |x-c| < w, unit L2, u1 = 0.
///  - theorem2_profile: u0 = u1 = (c0/2) <x>^{-(n/m + gamma)} / log(e + |x|),
///    |x| the distance to the nearest periodic image of the center.
///  - lowfreq_weighted: Fourier transform |xi|^a exp(-|xi|^2 w^2) (zero and
///    Nyquist modes cleared), unit L2, u1 = 0.
InitialData generate(const DataSpec& spec, const ModelParams& params, const Grid& grid);

/// Distance from every grid point to the nearest periodic image of `center`.
Eigen::ArrayXd periodic_distance(const Grid& grid, const std::vector<double>& center);

}  // namespace dwlab
