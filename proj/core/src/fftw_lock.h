// core/src/fftw_lock.h

// Copyright 2026  The cidnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CIDNN_SRC_FFTW_LOCK_H_
#define CIDNN_SRC_FFTW_LOCK_H_

#include <mutex>

namespace cidnn::internal {

// The FFTW planner is not reentrant; every plan creation holds this.
std::mutex& FftwPlannerMutex();

}  // namespace cidnn::internal

#endif  // CIDNN_SRC_FFTW_LOCK_H_
