//
// Copyright 2026 The mplkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MPLKIT_SNAPSHOT_IO_H_
#define MPLKIT_SNAPSHOT_IO_H_

// Binary snapshot file, native little-endian:
//
//   char[8]   magic "MPLSNAP\0"
//   u32       format version (1)
//   u32       activation (0 relu, 1 tanh)
//   f64       dropout rate
//   u64       number of layer sizes, then that many u64 sizes
//   i64       burn-in start, i64 thinning
//   u64       snapshot count n, u64 parameter count d
//   n times:  f64 step size, f64[d] theta
//
// Doubles are stored bit-for-bit, so a write/read cycle is exact.

#include <string>

#include "mplkit/posterior.h"

namespace mplkit {

inline constexpr char kSnapshotMagic[8] = {'M', 'P', 'L', 'S', 'N', 'A', 'P', '\0'};
inline constexpr unsigned kSnapshotVersion = 1;

std::string EncodeSnapshots(const PosteriorSampleSet& samples);
PosteriorSampleSet DecodeSnapshots(const std::string& bytes);

void WriteSnapshots(const PosteriorSampleSet& samples, const std::string& path);
PosteriorSampleSet ReadSnapshots(const std::string& path);

}  // namespace mplkit

#endif  // MPLKIT_SNAPSHOT_IO_H_
