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

#include "mplkit/snapshot_io.h"

#include <cstdint>
#include <cstring>
#include <string_view>
#include <vector>

#include "mplkit/error.h"
#include "mplkit/file_util.h"

namespace mplkit {
namespace {

template <typename T>
void Put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Get() {
    Require(pos_ + sizeof(T) <= bytes_.size(), ErrorCode::kParse,
            "snapshot file truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view Take(std::size_t n) {
    Require(pos_ + n <= bytes_.size(), ErrorCode::kParse, "snapshot file truncated");
    std::string_view v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EncodeSnapshots(const PosteriorSampleSet& samples) {
  std::string out(kSnapshotMagic, sizeof(kSnapshotMagic));
  const MlpArchitecture& arch = samples.architecture();
  Put<std::uint32_t>(out, kSnapshotVersion);
  Put<std::uint32_t>(out, arch.activation == Activation::kRelu ? 0u : 1u);
  Put<double>(out, arch.dropout_rate);
  Put<std::uint64_t>(out, arch.layer_sizes.size());
  for (std::size_t s : arch.layer_sizes) Put<std::uint64_t>(out, s);
  Put<std::int64_t>(out, samples.burn_in_start());
  Put<std::int64_t>(out, samples.thinning());
  Put<std::uint64_t>(out, samples.size());
  Put<std::uint64_t>(out, arch.ParameterCount());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Put<double>(out, samples.step_sizes()[i]);
    const auto& theta = samples.snapshots()[i].theta;
    out.append(reinterpret_cast<const char*>(theta.data()), theta.size() * sizeof(double));
  }
  return out;
}

PosteriorSampleSet DecodeSnapshots(const std::string& bytes) {
  Reader in(bytes);
  Require(in.Take(sizeof(kSnapshotMagic)) ==
              std::string_view(kSnapshotMagic, sizeof(kSnapshotMagic)),
          ErrorCode::kParse, "not a snapshot file (bad magic)");
  const auto version = in.Get<std::uint32_t>();
  Require(version == kSnapshotVersion, ErrorCode::kParse,
          "unsupported snapshot version " + std::to_string(version));
  MlpArchitecture arch;
  const auto activation = in.Get<std::uint32_t>();
  Require(activation <= 1, ErrorCode::kParse, "bad activation code");
  arch.activation = activation == 0 ? Activation::kRelu : Activation::kTanh;
  arch.dropout_rate = in.Get<double>();
  const auto num_sizes = in.Get<std::uint64_t>();
  Require(num_sizes >= 2 && num_sizes < 1024, ErrorCode::kParse, "bad layer count");
  for (std::uint64_t i = 0; i < num_sizes; ++i) {
    arch.layer_sizes.push_back(static_cast<std::size_t>(in.Get<std::uint64_t>()));
  }
  arch.Validate();
  const auto burn_in = in.Get<std::int64_t>();
  const auto thinning = in.Get<std::int64_t>();
  const auto count = in.Get<std::uint64_t>();
  const auto dim = in.Get<std::uint64_t>();
  Require(dim == arch.ParameterCount(), ErrorCode::kParse,
          "parameter count does not match architecture");
  std::vector<ModelParams> snapshots;
  std::vector<double> step_sizes;
  for (std::uint64_t i = 0; i < count; ++i) {
    step_sizes.push_back(in.Get<double>());
    const std::string_view raw = in.Take(dim * sizeof(double));
    std::vector<double> theta(dim);
    std::memcpy(theta.data(), raw.data(), raw.size());
    snapshots.push_back(ModelParams{arch, std::move(theta)});
  }
  Require(in.done(), ErrorCode::kParse, "trailing bytes in snapshot file");
  return PosteriorSampleSet(std::move(snapshots), std::move(step_sizes), burn_in, thinning);
}

void WriteSnapshots(const PosteriorSampleSet& samples, const std::string& path) {
  WriteFileAtomic(path, EncodeSnapshots(samples));
}

PosteriorSampleSet ReadSnapshots(const std::string& path) {
  return DecodeSnapshots(ReadFile(path));
}

}  // namespace mplkit
