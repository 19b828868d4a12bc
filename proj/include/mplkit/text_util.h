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

#ifndef MPLKIT_TEXT_UTIL_H_
#define MPLKIT_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace mplkit {

// Splits on `delimiter`. A single space delimiter splits on runs of
// whitespace and drops empty fields.
std::vector<std::string> SplitFields(std::string_view line, char delimiter);

std::vector<std::string> SplitLines(std::string_view text);

std::string Trim(std::string_view s);

// Shortest form guaranteed to round-trip through ParseDouble (17 digits).
std::string FormatDouble(double v);

// Throws a parse error unless the whole field is a number.
double ParseDouble(std::string_view field);
long long ParseInt(std::string_view field);

}  // namespace mplkit

#endif  // MPLKIT_TEXT_UTIL_H_
