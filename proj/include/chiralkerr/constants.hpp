#pragma once

namespace chiralkerr {

struct PhysicalConstants {
    double hbar;  // J s
    double eps0;  // F/m
    double kB;    // J/K
    double c;     // m/s
};

// CODATA 2018. The only place these numbers live.
inline constexpr PhysicalConstants kConstants{
    1.054571817e-34,
    8.8541878128e-12,
    1.380649e-23,
    299792458.0,
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// 2*pi*1 MHz in rad/s.
inline constexpr double kMHz2pi = kTwoPi * 1.0e6;

}  // namespace chiralkerr
