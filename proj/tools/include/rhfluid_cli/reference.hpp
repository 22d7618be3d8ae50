#pragma once

// Published reference columns used by `repro` and the acceptance suite.
// Index 0 is age 1.

#include <array>

namespace rhfluid::reference {

// Insert-only, alpha = 0.95, Euler with dt = 1e-6.
inline constexpr std::array<double, 7> kInsertOnlyEuler = {
    0.083458328, 0.188976794, 0.323793458, 0.303363752,
    0.095303269, 0.005092100, 0.000012417};

// Insert-only, alpha = 0.95, closed-form recurrence.
inline constexpr std::array<double, 7> kInsertOnlyRecurrence = {
    0.083458403, 0.188976856, 0.323793385, 0.303363594,
    0.095303242, 0.005092104, 0.000012417};

// Insert-only simulations at n = 65536, 1000 trials: per-age stddev.
inline constexpr std::array<double, 7> kInsertOnlySimStd = {
    0.001831579, 0.003140080, 0.003014369, 0.003202237,
    0.003651414, 0.000523627, 0.000014530};
inline constexpr std::array<double, 7> kDoubleHashSimStd = {
    0.001784843, 0.003113784, 0.002991134, 0.003156650,
    0.003633155, 0.000521156, 0.000014498};

// Tombstones, alpha = 0.9, 2n insertions.
inline constexpr std::array<double, 18> kTombstone = {
    0.0000000012, 0.0000000088, 0.0000000621, 0.0000004128, 0.0000025165,
    0.0000140033, 0.0000711550, 0.0003302926, 0.0014006589, 0.0054203409,
    0.0190426783, 0.0596408085, 0.1576758321, 0.3056376472, 0.3239990269,
    0.1187678782, 0.0079676382, 0.0000292668};

// No tombstones, alpha = 0.9, 2n insertions.
inline constexpr std::array<double, 12> kNoTombstone = {
    0.0109912456, 0.0132627846, 0.0164099523, 0.0215495612,
    0.0330311741, 0.0655968369, 0.1508513719, 0.2865694087,
    0.2955178737, 0.1003906169, 0.0058132004, 0.0000159736};

// No tombstones, alpha = 0.9, equilibrium.
inline constexpr std::array<double, 16> kEquilibrium = {
    0.0109890110, 0.0132380001, 0.0162108987, 0.0202345136,
    0.0258283516, 0.0338433436, 0.0457090363, 0.0638449846,
    0.0921369579, 0.1351848968, 0.1893101510, 0.2098741222,
    0.1226847741, 0.0205100133, 0.0004008004, 0.0000001447};

inline constexpr double kSuccessfulSearch = 3.15;
inline constexpr double kUnsuccessfulSearch = 3.59;

}  // namespace rhfluid::reference
