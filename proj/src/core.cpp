#include "abc/core.hpp"

namespace abc {

std::string_view to_string(EcnCodepoint c) {
  switch (c) {
    case EcnCodepoint::NotEct: return "not-ect";
    case EcnCodepoint::Accel: return "accel";
    case EcnCodepoint::Brake: return "brake";
    case EcnCodepoint::EcnSet: return "ecn-set";
  }
  return "?";
}

std::string_view to_string(Mark m) { return m == Mark::Accel ? "accel" : "brake"; }

}  // namespace abc
