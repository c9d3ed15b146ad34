// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS link-level simulator
// Copyright (C) 2026 The nfris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFRIS_RANDOM_HPP
#define NFRIS_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace nfris
{

using Rng = std::mt19937_64;

/// Labels of the independent random sub-streams of one trial.
enum class Stream : std::uint64_t
{
    MuPlacement = 1,
    ScatterersBsRis = 2,
    ScatterersRisMu = 3,
    ScatterersBsMu = 4,
    FadingBsRis = 5,
    FadingRisMu = 6,
    FadingBsMu = 7,
    Measurement = 8,
};

// SplitMix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of trial `index` in a campaign driven by `master_seed`.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return mix64(mix64(master_seed) ^ mix64(index + 0x5bd1e995ULL));
}

inline Rng make_stream(std::uint64_t seed, Stream label)
{
    return Rng(mix64(seed ^ mix64(static_cast<std::uint64_t>(label) * 0xd6e8feb86659fd93ULL)));
}

/// Circularly-symmetric complex Gaussian with unit variance.
inline std::complex<double> draw_cn01(Rng &rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace nfris

#endif
