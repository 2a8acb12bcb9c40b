#include "cmzi/errors.hpp"

#include <fmt/format.h>

namespace cmzi {

AmbiguousMeasurement::AmbiguousMeasurement(double visibility, double gamma_param)
    : Error(fmt::format("divergent contextual values: V = {:.6g}, Gamma = {:.6g}", visibility,
                        gamma_param)),
      visibility_(visibility),
      correlation_(gamma_param) {}

PostSelectionImpossible::PostSelectionImpossible(std::string drain, double probability)
    : Error(fmt::format("cannot post-select on drain {}: marginal probability {:.3g}", drain,
                        probability)),
      drain_(std::move(drain)),
      probability_(probability) {}

ConfigError::ConfigError(std::string where, const std::string& what)
    : Error(where + ": " + what), where_(std::move(where)) {}

}  // namespace cmzi
