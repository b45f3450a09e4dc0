#pragma once
// generated by gen_oracles.py (mpmath, 50 digits)

namespace oracle {

inline constexpr double kGammaX[] = {0.3, 1.7, 4.5, -0.5, -2.3};
inline constexpr double kGamma[] = {2.9915689876875907446, 9.0863873285329044156e-1, 1.1631728396567448929e+1, -3.5449077018110320546, -1.4471073942559181166};
inline constexpr double kHypArgs[] = {0.8, 0.2, 1.6, 0.3, 0.8, 0.2, 1.6, 0.95, 0.5, 0.5, 1.0, 0.999, 0.5714285714285714, 0.42857142857142855, 1.1428571428571428, 0.999999, 1.2, -0.2, 2.4, 0.7, 0.75, 0.25, 1.5, 0.5};
inline constexpr double kHyp[] = {1.034540608704566857, 1.2087729398825112142, 3.0819607086988160164, 2.7677794663694135951, 9.1070838555217831273e-1, 1.0823922002923939688};
inline constexpr double kHypDz[] = {1.3364103580060531473e-1, 7.9431093153935444811e-1, 3.1777766768056260035e+2, 4.460164793918470319e+4, -1.7218169960781569486e-1, 2.2417076458398255906e-1};
inline constexpr double kNuCKappa[] = {3.3, 5.0, 7.2};
inline constexpr double kNuOverC[] = {-1.2925456214287901409e+1, 1.3130751976665829435e+1, 1.4295834427570699939e+1};
inline constexpr double kZConfig[] = {0.0, 1.0, 2.5, 4.0};
inline constexpr double kZKappa5[] = {7.4343625959205851651e-1, 2.9121951849095383221e-1};
inline constexpr double kZKappa3p5[] = {6.9029367984267888179e-1, 1.2420290119078490789e-1};
inline constexpr double kLogGradKappa5Parallel[] = {2.9545873462194470585e-1, -4.1213052138209934634e-1, 3.0303775043901281041e-1, -1.8636596367885816992e-1};
inline constexpr double kLogGradKappa5Rainbow[] = {-2.0409987997099769402e-1, 6.9799973326888376448e-1, -5.8506645328177367825e-1, 9.1166599983887607787e-2};
inline constexpr double kCardyChi[] = {0.25, 0.5, 0.6666666666666666, 0.1};
inline constexpr double kCardy[] = {6.2645120866576954516e-1, 4.9999999999999999964e-1, 4.1868481685960056173e-1, 7.3266299314961657854e-1};

}  // namespace oracle
