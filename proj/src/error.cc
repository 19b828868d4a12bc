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

#include "mplkit/error.h"

namespace mplkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kEncoding: return "encoding error";
    case ErrorCode::kSchedule: return "schedule error";
    case ErrorCode::kState: return "state error";
    case ErrorCode::kInput: return "input error";
    case ErrorCode::kIo: return "io error";
  }
  return "error";
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(ErrorCodeName(code)) + ": " + message);
}

}  // namespace mplkit
