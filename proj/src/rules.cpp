#include "dispersim/rules.hpp"

#include "dispersim/errors.hpp"

namespace dispersim {

std::unique_ptr<LocalRule> make_rule(std::string_view name) {
  if (name == "simple-dfs") return std::make_unique<SimpleDfsRule>();
  if (name == "zombie") return std::make_unique<ZombieRule>();
  if (name == "svl") return std::make_unique<SvlRule>();
  throw_error(Errc::UnknownRule, "no algorithm named '" + std::string(name) + "'");
}

AgentMode mode_from_name(std::string_view name) {
  if (name == "leader") return AgentMode::Leader;
  if (name == "zombie") return AgentMode::Zombie;
  if (name == "settled") return AgentMode::Settled;
  throw_error(Errc::ParseError, "unknown agent mode '" + std::string(name) + "'");
}

}  // namespace dispersim
