#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dispersim {

// Failure kinds surfaced by the library. The CLI maps anything thrown
// here to exit code 2 (configuration / input error).
enum class Errc {
  PortClash,
  PortGap,
  SelfLoop,
  DuplicateEdge,
  Disconnected,
  InvalidPort,
  ConnectivityFailure,
  InvalidParams,
  ParseError,
  DuplicateId,
  BadNode,
  KExceedsN,
  RuleEmittedInvalidPort,
  UnknownAgent,
  UnknownRule,
  Io,
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::PortClash: return "PortClash";
    case Errc::PortGap: return "PortGap";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::Disconnected: return "Disconnected";
    case Errc::InvalidPort: return "InvalidPort";
    case Errc::ConnectivityFailure: return "ConnectivityFailure";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::BadNode: return "BadNode";
    case Errc::KExceedsN: return "KExceedsN";
    case Errc::RuleEmittedInvalidPort: return "RuleEmittedInvalidPort";
    case Errc::UnknownAgent: return "UnknownAgent";
    case Errc::UnknownRule: return "UnknownRule";
    case Errc::Io: return "Io";
  }
  return "Error";
}

}  // namespace dispersim
