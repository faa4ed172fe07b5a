/*
 * Copyright 2026 The uhlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UHLAB_ERRORS_HPP
#define UHLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace uhlab {

enum class ErrorKind {
  DimensionMismatch,
  ResolutionTooSmall,
  AlphaOutOfDisk,
  NotSU11,
  ROutOfRange,
  NonpositiveA,
  RZero,
  SectionNotConverged,
  NotCertifiedUH,
  WindingObstruction,
  RecursionOverflow,
  EpsilonOutOfWindow,
  TOffAnnulus,
  RBelowFloor,
  PivotTooSmall,
  DomainOverlap,
  NotCAK,
  ConfigInvalid,
  ParseError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ResolutionTooSmall: return "ResolutionTooSmall";
    case ErrorKind::AlphaOutOfDisk: return "AlphaOutOfDisk";
    case ErrorKind::NotSU11: return "NotSU11";
    case ErrorKind::ROutOfRange: return "ROutOfRange";
    case ErrorKind::NonpositiveA: return "NonpositiveA";
    case ErrorKind::RZero: return "RZero";
    case ErrorKind::SectionNotConverged: return "SectionNotConverged";
    case ErrorKind::NotCertifiedUH: return "NotCertifiedUH";
    case ErrorKind::WindingObstruction: return "WindingObstruction";
    case ErrorKind::RecursionOverflow: return "RecursionOverflow";
    case ErrorKind::EpsilonOutOfWindow: return "EpsilonOutOfWindow";
    case ErrorKind::TOffAnnulus: return "TOffAnnulus";
    case ErrorKind::RBelowFloor: return "RBelowFloor";
    case ErrorKind::PivotTooSmall: return "PivotTooSmall";
    case ErrorKind::DomainOverlap: return "DomainOverlap";
    case ErrorKind::NotCAK: return "NotCAK";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported through this type;
/// the kind is the stable, machine-checkable part.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace uhlab

#endif  // UHLAB_ERRORS_HPP
