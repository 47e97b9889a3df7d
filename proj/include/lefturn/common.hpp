#pragma once

#include <string>

namespace lefturn {

enum class ControllerKind { BaseAv1, BaseAv2, SituationAware };

const char* to_string(ControllerKind k);
// Throws std::invalid_argument for an unknown name.
ControllerKind controller_kind_from_string(const std::string& s);

enum class RunStatus { Ok, Collision, Infeasible };

const char* to_string(RunStatus s);

}  // namespace lefturn
