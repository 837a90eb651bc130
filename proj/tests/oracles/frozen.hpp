// Generated by tests/oracles/generate.py; do not edit by hand.
#pragma once
#include <array>
#include <cstdint>
namespace oracle {
inline constexpr std::int64_t kEnergyZ6Num = 1;
inline constexpr std::int64_t kEnergyZ6Den = 27;
inline constexpr std::array<std::int64_t, 5> kBohrZ12 = {-2, -1, 0, 1, 2};
inline constexpr std::array<std::int64_t, 3> kSumsetZ8 = {0, 1, 2};
inline constexpr std::array<std::int64_t, 6> kSumsetZ7 = {-3, -1, 0, 1, 2, 3};
inline constexpr std::array<std::int64_t, 3> kAnnihilatorZ6 = {-2, 0, 2};
inline constexpr std::array<double, 6> kDftZ6Re = {0.3333333333333333, 0.0, 0.3333333333333333, 0.0, 0.3333333333333333, 0.0};
struct GaussRow { double gamma, exact, riemann8x; };
inline constexpr std::array<GaussRow, 21> kGaussian = {{
    {-5.0, 9.341334210875704e-06, 9.341334210887302e-06},
    {-4.5, 0.00010042880727667085, 0.00010042880727662122},
    {-4.0, 0.0008408801081824545, 0.00084088010818245},
    {-3.5, 0.0054832270873414034, 0.005483227087341446},
    {-3.0, 0.02784612482553607, 0.027846124825536084},
    {-2.5, 0.11013356012101853, 0.11013356012101848},
    {-2.0, 0.33923524751608825, 0.33923524751608825},
    {-1.5, 0.8137830541091574, 0.8137830541091573},
    {-1.0, 1.520346901066281, 1.520346901066281},
    {-0.5, 2.2120916882928263, 2.2120916882928268},
    {0.0, 2.5066282746310007, 2.5066282746310007},
    {0.5, 2.2120916882928263, 2.2120916882928268},
    {1.0, 1.520346901066281, 1.520346901066281},
    {1.5, 0.8137830541091574, 0.8137830541091573},
    {2.0, 0.33923524751608825, 0.33923524751608825},
    {2.5, 0.11013356012101853, 0.11013356012101848},
    {3.0, 0.02784612482553607, 0.027846124825536084},
    {3.5, 0.0054832270873414034, 0.005483227087341446},
    {4.0, 0.0008408801081824545, 0.00084088010818245},
    {4.5, 0.00010042880727667085, 0.00010042880727662122},
    {5.0, 9.341334210875704e-06, 9.341334210887302e-06},
}};
inline constexpr double kGaussianAtZero = 2.5066282746310007;
inline constexpr double kIndicatorAtPi = 1.626662745768116e-44;
inline constexpr std::array<double, 5> kTrigCoeffs = {-2.2482856820732406e-48, 0.5, 1.0, 0.5, -2.2482856820732406e-48};  // m = -2..2
inline constexpr std::int64_t kArcCount_64 = 7;  // r = 0.3
inline constexpr std::int64_t kArcCount_1000 = 15;  // r = 0.05
inline constexpr std::int64_t kArcCount_12 = 1;  // r = 0.3490658503988659
inline constexpr double kHaarLiftDev_256 = 0.040000000000000036;  // n = 256, r = 0.3, 4096 midpoints
}  // namespace oracle
