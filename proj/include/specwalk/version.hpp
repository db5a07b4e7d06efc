#pragma once

namespace specwalk {

inline constexpr const char* kVersion = "0.1.0";

// PRNG scheme identifier recorded in provenance metadata. Bumped whenever
// the sampling algorithm changes in a way that alters generated streams.
inline constexpr const char* kRngScheme = "specwalk-rng-v1(mt19937_64/splitmix64,box-muller)";

} // namespace specwalk
