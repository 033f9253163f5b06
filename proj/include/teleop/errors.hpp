// Copyright 2026 The ArmTeleop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARMTELEOP_ERRORS_HPP_
#define ARMTELEOP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace teleop {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry / kinematics
struct NonUnitQuaternion : Error {
  using Error::Error;
};

// sEMG pipeline
struct WindowTooShort : Error {
  using Error::Error;
};
struct ChannelCountMismatch : Error {
  using Error::Error;
};
struct SingleClassDataset : Error {
  using Error::Error;
};
struct NonFiniteFeature : Error {
  using Error::Error;
};
struct TrainingDiverged : Error {
  using Error::Error;
};
struct ModelNotLoaded : Error {
  using Error::Error;
};

// smoothing
struct EmptyWindow : Error {
  using Error::Error;
};

// wire protocol
struct PayloadArityMismatch : Error {
  using Error::Error;
};

// synchronization
struct NotCalibrated : Error {
  using Error::Error;
};
struct ScenarioInvalid : Error {
  using Error::Error;
};
struct ConnectFailed : Error {
  using Error::Error;
};
struct PeerDisconnected : Error {
  using Error::Error;
};

// metrics
struct EmptyTrajectory : Error {
  using Error::Error;
};
struct NoPairs : Error {
  using Error::Error;
};

// scenario generation
struct UnreachablePath : Error {
  using Error::Error;
};

// file I/O
struct IoError : Error {
  using Error::Error;
};

}  // namespace teleop

#endif  // ARMTELEOP_ERRORS_HPP_
