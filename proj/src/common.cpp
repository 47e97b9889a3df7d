#include "lefturn/common.hpp"

#include <stdexcept>

namespace lefturn {

const char* to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::BaseAv1: return "BaseAv1";
    case ControllerKind::BaseAv2: return "BaseAv2";
    case ControllerKind::SituationAware: return "SituationAware";
  }
  return "?";
}

ControllerKind controller_kind_from_string(const std::string& s) {
  if (s == "BaseAv1") return ControllerKind::BaseAv1;
  if (s == "BaseAv2") return ControllerKind::BaseAv2;
  if (s == "SituationAware") return ControllerKind::SituationAware;
  throw std::invalid_argument("unknown controller '" + s + "'");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Collision: return "collision";
    case RunStatus::Infeasible: return "infeasible";
  }
  return "?";
}

}  // namespace lefturn
