#pragma once

// Measured values of the two-photon cluster experiment, used as fit targets
// and as comparison points in reports.

#include <array>

namespace oneway::reference {

/// Witness observables in cluster::kWitnessTerms order.
inline constexpr std::array<double, 6> kWitnessTermValues{0.9070, 0.9076, 0.9812, 0.9071, 0.8911, 0.9372};
inline constexpr std::array<double, 6> kWitnessTermErrors{0.0036, 0.0035, 0.0016, 0.0037, 0.0040, 0.0030};

inline constexpr double kWitnessValue = -0.766;
inline constexpr double kWitnessError = 0.004;
inline constexpr double kFidelityBound = 0.883;

/// Coincidence fringe visibilities for D1-D2, D1-D4, D3-D2, D3-D4.
inline constexpr std::array<double, 4> kVisibilities{0.842, 0.943, 0.968, 0.949};

inline constexpr double kGroverSuccessFeedForward = 0.961;
inline constexpr double kGroverSuccessFeedForwardError = 0.002;
inline constexpr double kGroverSuccessNoFeedForward = 0.249;
inline constexpr double kGroverSuccessNoFeedForwardError = 0.004;

/// Output-state fidelities per (s2, s3) branch 00, 01, 10, 11.
inline constexpr std::array<double, 4> kHorseshoeFidelities{0.954, 0.940, 0.936, 0.910};
inline constexpr std::array<double, 4> kBoxFidelities{0.935, 0.962, 0.969, 0.975};

/// Cluster-state coincidence rate in events per second; each value integrated for 1 s.
inline constexpr double kEventRate = 1.2e4;
inline constexpr double kIntegrationTime = 1.0;

}  // namespace oneway::reference
