#include "dstree/error.hpp"

namespace dstree {

std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::InvalidPath: return "InvalidPath";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::DegenerateBeta: return "DegenerateBeta";
    case Errc::InsufficientAtoms: return "InsufficientAtoms";
    case Errc::TailNotRegular: return "TailNotRegular";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::InfeasibleConditioning: return "InfeasibleConditioning";
    case Errc::SupportTooLarge: return "SupportTooLarge";
    case Errc::BadRule: return "BadRule";
    case Errc::KitFailure: return "KitFailure";
    case Errc::InvalidPoint: return "InvalidPoint";
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::SizeLimit: return "SizeLimit";
    case Errc::DegenerateScales: return "DegenerateScales";
    case Errc::ConfigMismatch: return "ConfigMismatch";
    case Errc::NonGraphDecoration: return "NonGraphDecoration";
    case Errc::Config: return "ConfigError";
    case Errc::Io: return "IoError";
  }
  return "Error";
}

}  // namespace dstree
