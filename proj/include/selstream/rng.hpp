// Copyright 2026 The selstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace selstream {

using Rng = std::mt19937_64;

/// One splitmix64 step; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent sub-seed for a named purpose. Every component that needs
/// randomness derives its seed from the master seed through this, so adding
/// a consumer never shifts another consumer's stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    std::uint64_t s = master ^ (tag * 0xD1B54A32D192ED03ULL);
    splitmix64(s);
    return splitmix64(s);
}

/// Tags for derive_seed.
enum SeedTag : std::uint64_t {
    kSeedPattern = 1,
    kSeedChain = 2,
    kSeedConcepts = 3,
    kSeedPools = 4,
    kSeedNoise = 5,
    kSeedInterleave = 6,
    kSeedThresholds = 7,
};

}  // namespace selstream
