#include "asympair/verdict.hpp"

namespace asympair {

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::in_space: return "InSpace";
    case Outcome::not_in_space: return "NotInSpace";
    case Outcome::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Outcome parse_outcome(const std::string& text) {
  if (text == "InSpace") return Outcome::in_space;
  if (text == "NotInSpace") return Outcome::not_in_space;
  if (text == "Inconclusive") return Outcome::inconclusive;
  throw std::invalid_argument("unknown outcome '" + text + "'");
}

}  // namespace asympair
