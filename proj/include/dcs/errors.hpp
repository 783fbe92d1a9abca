/*
 * Copyright (c) 2026, the dcs authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef DCS_ERRORS_HPP_
#define DCS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dcs {

// Contract violations throw; recoverable findings (audits, violation-mode
// verdicts) are returned as values instead.
class DcsError : public std::runtime_error {
 public:
  explicit DcsError(const std::string& what) : std::runtime_error(what) {}
};

#define DCS_DEFINE_ERROR(Name)                                        \
  class Name : public DcsError {                                      \
   public:                                                            \
    explicit Name(const std::string& what) : DcsError(#Name ": " + what) {} \
  }

DCS_DEFINE_ERROR(MixedStateSpace);
DCS_DEFINE_ERROR(UnknownStateSpace);
DCS_DEFINE_ERROR(StateSpaceMismatch);
DCS_DEFINE_ERROR(CausalViolation);
DCS_DEFINE_ERROR(RidCollision);
DCS_DEFINE_ERROR(CycleDetected);
DCS_DEFINE_ERROR(UnknownRid);
DCS_DEFINE_ERROR(UnsealedDag);
DCS_DEFINE_ERROR(NotSubscribed);
DCS_DEFINE_ERROR(NotNeighbor);
DCS_DEFINE_ERROR(Unreachable);
DCS_DEFINE_ERROR(PolicyTamper);
DCS_DEFINE_ERROR(NonQuiescent);
DCS_DEFINE_ERROR(ParseError);
DCS_DEFINE_ERROR(ConfigError);

#undef DCS_DEFINE_ERROR

}  // namespace dcs

#endif  // DCS_ERRORS_HPP_
