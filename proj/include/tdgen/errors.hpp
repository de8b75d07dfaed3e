#pragma once

#include <stdexcept>
#include <string>

namespace tdgen {

enum class Errc {
  // vcd
  MalformedHeader,
  UnknownVarId,
  WidthMismatch,
  // trace
  NoClockEdges,
  UnknownSignal,
  IndexOutOfRange,
  NotScalar,
  // wavejson
  UnsupportedWaveChar,
  DataCountMismatch,
  RaggedLanes,
  // verilog
  NoModuleFound,
  MultipleModules,
  UnparsablePortList,
  ServiceUnavailable,
  EmptyResponse,
  // fsm
  IncompleteSchedule,
  BadMachineDefinition,
  // bands
  UnknownTask,
  InfeasibleConstraint,
  MissingAnnotations,
  // qa
  QuotaInfeasible,
  NotApplicable,
  UngroundedPair,
  // dataset / metrics / io
  PoolTooSmall,
  IoFailure,
  MissingImage,
  LengthMismatch,
  EmptyCorpus,
  MissingIds,
  ParseFailure,
  BadConfig,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::UnknownVarId: return "UnknownVarId";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::NoClockEdges: return "NoClockEdges";
    case Errc::UnknownSignal: return "UnknownSignal";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NotScalar: return "NotScalar";
    case Errc::UnsupportedWaveChar: return "UnsupportedWaveChar";
    case Errc::DataCountMismatch: return "DataCountMismatch";
    case Errc::RaggedLanes: return "RaggedLanes";
    case Errc::NoModuleFound: return "NoModuleFound";
    case Errc::MultipleModules: return "MultipleModules";
    case Errc::UnparsablePortList: return "UnparsablePortList";
    case Errc::ServiceUnavailable: return "ServiceUnavailable";
    case Errc::EmptyResponse: return "EmptyResponse";
    case Errc::IncompleteSchedule: return "IncompleteSchedule";
    case Errc::BadMachineDefinition: return "BadMachineDefinition";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::InfeasibleConstraint: return "InfeasibleConstraint";
    case Errc::MissingAnnotations: return "MissingAnnotations";
    case Errc::QuotaInfeasible: return "QuotaInfeasible";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::UngroundedPair: return "UngroundedPair";
    case Errc::PoolTooSmall: return "PoolTooSmall";
    case Errc::IoFailure: return "IoFailure";
    case Errc::MissingImage: return "MissingImage";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::MissingIds: return "MissingIds";
    case Errc::ParseFailure: return "ParseFailure";
    case Errc::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tdgen
