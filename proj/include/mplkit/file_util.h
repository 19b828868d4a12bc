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

#ifndef MPLKIT_FILE_UTIL_H_
#define MPLKIT_FILE_UTIL_H_

#include <string>
#include <string_view>

namespace mplkit {

// Writes to "<path>.tmp" and renames over `path`, so readers never observe a
// partially written file. Throws an io error on failure.
void WriteFileAtomic(const std::string& path, std::string_view contents);

std::string ReadFile(const std::string& path);

}  // namespace mplkit

#endif  // MPLKIT_FILE_UTIL_H_
