// SPDX-License-Identifier: Apache-2.0
//
// Dual-tree filter coefficients (Kingsbury near-symmetric and quarter-shift sets).

#include "filter_coeffs.hpp"

namespace awsp::detail {

namespace {
constexpr double near_sym_a_h0o[] = {
    -0.05, 0.25, 0.6,
    0.25, -0.05};
constexpr double near_sym_a_g0o[] = {
    -0.010714285714285713, -0.05357142857142857, 0.26071428571428573,
    0.6071428571428571, 0.26071428571428573, -0.05357142857142857,
    -0.010714285714285713};
constexpr double near_sym_a_h1o[] = {
    0.010714285714285713, -0.05357142857142857, -0.26071428571428573,
    0.6071428571428571, -0.26071428571428573, -0.05357142857142857,
    0.010714285714285713};
constexpr double near_sym_a_g1o[] = {
    -0.05, -0.25, 0.6,
    -0.25, -0.05};
constexpr double near_sym_b_h0o[] = {
    -0.0017578125, 0.0, 0.022265625,
    -0.046875, -0.0482421875, 0.296875,
    0.55546875, 0.296875, -0.0482421875,
    -0.046875, 0.022265625, 0.0,
    -0.0017578125};
constexpr double near_sym_b_g0o[] = {
    7.062639508928571e-05, 0.0, -0.0013419015066964285,
    -0.0018833705357142855, 0.007156808035714285, 0.023856026785714284,
    -0.05564313616071428, -0.05168805803571428, 0.29975760323660716,
    0.5594308035714286, 0.29975760323660716, -0.05168805803571428,
    -0.05564313616071428, 0.023856026785714284, 0.007156808035714285,
    -0.0018833705357142855, -0.0013419015066964285, 0.0,
    7.062639508928571e-05};
constexpr double near_sym_b_h1o[] = {
    -7.062639508928571e-05, 0.0, 0.0013419015066964285,
    -0.0018833705357142855, -0.007156808035714285, 0.023856026785714284,
    0.05564313616071428, -0.05168805803571428, -0.29975760323660716,
    0.5594308035714286, -0.29975760323660716, -0.05168805803571428,
    0.05564313616071428, 0.023856026785714284, -0.007156808035714285,
    -0.0018833705357142855, 0.0013419015066964285, 0.0,
    -7.062639508928571e-05};
constexpr double near_sym_b_g1o[] = {
    -0.0017578125, -0.0, 0.022265625,
    0.046875, -0.0482421875, -0.296875,
    0.55546875, -0.296875, -0.0482421875,
    0.046875, 0.022265625, -0.0,
    -0.0017578125};
constexpr double qshift_a_h0a[] = {
    0.051130405283831656, -0.013975370246888838, -0.10983605166597087,
    0.26383956105893763, 0.7666284677930372, 0.5636557101270515,
    0.0008736226952170968, -0.1002312195074762, -0.0016896812725281543,
    -0.006181881892116438};
constexpr double qshift_a_h0b[] = {
    -0.006181881892116438, -0.0016896812725281543, -0.1002312195074762,
    0.0008736226952170968, 0.5636557101270515, 0.7666284677930372,
    0.26383956105893763, -0.10983605166597087, -0.013975370246888838,
    0.051130405283831656};
constexpr double qshift_a_g0a[] = {
    -0.006181881892116438, -0.0016896812725281543, -0.1002312195074762,
    0.0008736226952170968, 0.5636557101270515, 0.7666284677930372,
    0.26383956105893763, -0.10983605166597087, -0.013975370246888838,
    0.051130405283831656};
constexpr double qshift_a_g0b[] = {
    0.051130405283831656, -0.013975370246888838, -0.10983605166597087,
    0.26383956105893763, 0.7666284677930372, 0.5636557101270515,
    0.0008736226952170968, -0.1002312195074762, -0.0016896812725281543,
    -0.006181881892116438};
constexpr double qshift_a_h1a[] = {
    -0.006181881892116438, 0.0016896812725281543, -0.1002312195074762,
    -0.0008736226952170968, 0.5636557101270515, -0.7666284677930372,
    0.26383956105893763, 0.10983605166597087, -0.013975370246888838,
    -0.051130405283831656};
constexpr double qshift_a_h1b[] = {
    -0.051130405283831656, -0.013975370246888838, 0.10983605166597087,
    0.26383956105893763, -0.7666284677930372, 0.5636557101270515,
    -0.0008736226952170968, -0.1002312195074762, 0.0016896812725281543,
    -0.006181881892116438};
constexpr double qshift_a_g1a[] = {
    -0.051130405283831656, -0.013975370246888838, 0.10983605166597087,
    0.26383956105893763, -0.7666284677930372, 0.5636557101270515,
    -0.0008736226952170968, -0.1002312195074762, 0.0016896812725281543,
    -0.006181881892116438};
constexpr double qshift_a_g1b[] = {
    -0.006181881892116438, 0.0016896812725281543, -0.1002312195074762,
    -0.0008736226952170968, 0.5636557101270515, -0.7666284677930372,
    0.26383956105893763, 0.10983605166597087, -0.013975370246888838,
    -0.051130405283831656};
constexpr double qshift_b_h0a[] = {
    0.003253142763653182, -0.00388321199915849, 0.03466034684485349,
    -0.03887280126882779, -0.11720388769911527, 0.27529538466888204,
    0.7561456438925225, 0.5688104207121227, 0.011866092033797,
    -0.1067118046866654, 0.023825384794920298, 0.01702522388155399,
    -0.005439475937274115, -0.004556895628475491};
constexpr double qshift_b_h0b[] = {
    -0.004556895628475491, -0.005439475937274115, 0.01702522388155399,
    0.023825384794920298, -0.1067118046866654, 0.011866092033797,
    0.5688104207121227, 0.7561456438925225, 0.27529538466888204,
    -0.11720388769911527, -0.03887280126882779, 0.03466034684485349,
    -0.00388321199915849, 0.003253142763653182};
constexpr double qshift_b_g0a[] = {
    -0.004556895628475491, -0.005439475937274115, 0.01702522388155399,
    0.023825384794920298, -0.1067118046866654, 0.011866092033797,
    0.5688104207121227, 0.7561456438925225, 0.27529538466888204,
    -0.11720388769911527, -0.03887280126882779, 0.03466034684485349,
    -0.00388321199915849, 0.003253142763653182};
constexpr double qshift_b_g0b[] = {
    0.003253142763653182, -0.00388321199915849, 0.03466034684485349,
    -0.03887280126882779, -0.11720388769911527, 0.27529538466888204,
    0.7561456438925225, 0.5688104207121227, 0.011866092033797,
    -0.1067118046866654, 0.023825384794920298, 0.01702522388155399,
    -0.005439475937274115, -0.004556895628475491};
constexpr double qshift_b_h1a[] = {
    -0.004556895628475491, 0.005439475937274115, 0.01702522388155399,
    -0.023825384794920298, -0.1067118046866654, -0.011866092033797,
    0.5688104207121227, -0.7561456438925225, 0.27529538466888204,
    0.11720388769911527, -0.03887280126882779, -0.03466034684485349,
    -0.00388321199915849, -0.003253142763653182};
constexpr double qshift_b_h1b[] = {
    -0.003253142763653182, -0.00388321199915849, -0.03466034684485349,
    -0.03887280126882779, 0.11720388769911527, 0.27529538466888204,
    -0.7561456438925225, 0.5688104207121227, -0.011866092033797,
    -0.1067118046866654, -0.023825384794920298, 0.01702522388155399,
    0.005439475937274115, -0.004556895628475491};
constexpr double qshift_b_g1a[] = {
    -0.003253142763653182, -0.00388321199915849, -0.03466034684485349,
    -0.03887280126882779, 0.11720388769911527, 0.27529538466888204,
    -0.7561456438925225, 0.5688104207121227, -0.011866092033797,
    -0.1067118046866654, -0.023825384794920298, 0.01702522388155399,
    0.005439475937274115, -0.004556895628475491};
constexpr double qshift_b_g1b[] = {
    -0.004556895628475491, 0.005439475937274115, 0.01702522388155399,
    -0.023825384794920298, -0.1067118046866654, -0.011866092033797,
    0.5688104207121227, -0.7561456438925225, 0.27529538466888204,
    0.11720388769911527, -0.03887280126882779, -0.03466034684485349,
    -0.00388321199915849, -0.003253142763653182};
constexpr double qshift_c_h0a[] = {
    -0.0047616119384559135, -0.00044602278926228516, -7.144197327965012e-05,
    0.034914612306842195, -0.03727389579989796, -0.11591145742744076,
    0.2763686431330317, 0.7563937651990367, 0.567134484100133,
    0.01463740596447335, -0.11255888425752203, 0.02228926326692271,
    0.018498682724156248, -0.0072026778782583465, -0.0002276522058977718,
    0.002430349945148675};
constexpr double qshift_c_h0b[] = {
    0.002430349945148675, -0.0002276522058977718, -0.0072026778782583465,
    0.018498682724156248, 0.02228926326692271, -0.11255888425752203,
    0.01463740596447335, 0.567134484100133, 0.7563937651990367,
    0.2763686431330317, -0.11591145742744076, -0.03727389579989796,
    0.034914612306842195, -7.144197327965012e-05, -0.00044602278926228516,
    -0.0047616119384559135};
constexpr double qshift_c_g0a[] = {
    0.002430349945148675, -0.0002276522058977718, -0.0072026778782583465,
    0.018498682724156248, 0.02228926326692271, -0.11255888425752203,
    0.01463740596447335, 0.567134484100133, 0.7563937651990367,
    0.2763686431330317, -0.11591145742744076, -0.03727389579989796,
    0.034914612306842195, -7.144197327965012e-05, -0.00044602278926228516,
    -0.0047616119384559135};
constexpr double qshift_c_g0b[] = {
    -0.0047616119384559135, -0.00044602278926228516, -7.144197327965012e-05,
    0.034914612306842195, -0.03727389579989796, -0.11591145742744076,
    0.2763686431330317, 0.7563937651990367, 0.567134484100133,
    0.01463740596447335, -0.11255888425752203, 0.02228926326692271,
    0.018498682724156248, -0.0072026778782583465, -0.0002276522058977718,
    0.002430349945148675};
constexpr double qshift_c_h1a[] = {
    0.002430349945148675, 0.0002276522058977718, -0.0072026778782583465,
    -0.018498682724156248, 0.02228926326692271, 0.11255888425752203,
    0.01463740596447335, -0.567134484100133, 0.7563937651990367,
    -0.2763686431330317, -0.11591145742744076, 0.03727389579989796,
    0.034914612306842195, 7.144197327965012e-05, -0.00044602278926228516,
    0.0047616119384559135};
constexpr double qshift_c_h1b[] = {
    0.0047616119384559135, -0.00044602278926228516, 7.144197327965012e-05,
    0.034914612306842195, 0.03727389579989796, -0.11591145742744076,
    -0.2763686431330317, 0.7563937651990367, -0.567134484100133,
    0.01463740596447335, 0.11255888425752203, 0.02228926326692271,
    -0.018498682724156248, -0.0072026778782583465, 0.0002276522058977718,
    0.002430349945148675};
constexpr double qshift_c_g1a[] = {
    0.0047616119384559135, -0.00044602278926228516, 7.144197327965012e-05,
    0.034914612306842195, 0.03727389579989796, -0.11591145742744076,
    -0.2763686431330317, 0.7563937651990367, -0.567134484100133,
    0.01463740596447335, 0.11255888425752203, 0.02228926326692271,
    -0.018498682724156248, -0.0072026778782583465, 0.0002276522058977718,
    0.002430349945148675};
constexpr double qshift_c_g1b[] = {
    0.002430349945148675, 0.0002276522058977718, -0.0072026778782583465,
    -0.018498682724156248, 0.02228926326692271, 0.11255888425752203,
    0.01463740596447335, -0.567134484100133, 0.7563937651990367,
    -0.2763686431330317, -0.11591145742744076, 0.03727389579989796,
    0.034914612306842195, 7.144197327965012e-05, -0.00044602278926228516,
    0.0047616119384559135};
constexpr double qshift_d_h0a[] = {
    -0.002284127440270531, 0.0012098941630734423, -0.011834794515430786,
    0.0012834569993443994, 0.044365221606616996, -0.05327610880304726,
    -0.1133058863621428, 0.2809028632221865, 0.7528160380878561,
    0.5658080673964587, 0.024550152433666563, -0.12018854471079482,
    0.018156493945546453, 0.03152637712208465, -0.006628794612430063,
    -0.0025761743066007948, 0.0012775586538069982, 0.002411869456666278};
constexpr double qshift_d_h0b[] = {
    0.002411869456666278, 0.0012775586538069982, -0.0025761743066007948,
    -0.006628794612430063, 0.03152637712208465, 0.018156493945546453,
    -0.12018854471079482, 0.024550152433666563, 0.5658080673964587,
    0.7528160380878561, 0.2809028632221865, -0.1133058863621428,
    -0.05327610880304726, 0.044365221606616996, 0.0012834569993443994,
    -0.011834794515430786, 0.0012098941630734423, -0.002284127440270531};
constexpr double qshift_d_g0a[] = {
    0.002411869456666278, 0.0012775586538069982, -0.0025761743066007948,
    -0.006628794612430063, 0.03152637712208465, 0.018156493945546453,
    -0.12018854471079482, 0.024550152433666563, 0.5658080673964587,
    0.7528160380878561, 0.2809028632221865, -0.1133058863621428,
    -0.05327610880304726, 0.044365221606616996, 0.0012834569993443994,
    -0.011834794515430786, 0.0012098941630734423, -0.002284127440270531};
constexpr double qshift_d_g0b[] = {
    -0.002284127440270531, 0.0012098941630734423, -0.011834794515430786,
    0.0012834569993443994, 0.044365221606616996, -0.05327610880304726,
    -0.1133058863621428, 0.2809028632221865, 0.7528160380878561,
    0.5658080673964587, 0.024550152433666563, -0.12018854471079482,
    0.018156493945546453, 0.03152637712208465, -0.006628794612430063,
    -0.0025761743066007948, 0.0012775586538069982, 0.002411869456666278};
constexpr double qshift_d_h1a[] = {
    0.002411869456666278, -0.0012775586538069982, -0.0025761743066007948,
    0.006628794612430063, 0.03152637712208465, -0.018156493945546453,
    -0.12018854471079482, -0.024550152433666563, 0.5658080673964587,
    -0.7528160380878561, 0.2809028632221865, 0.1133058863621428,
    -0.05327610880304726, -0.044365221606616996, 0.0012834569993443994,
    0.011834794515430786, 0.0012098941630734423, 0.002284127440270531};
constexpr double qshift_d_h1b[] = {
    0.002284127440270531, 0.0012098941630734423, 0.011834794515430786,
    0.0012834569993443994, -0.044365221606616996, -0.05327610880304726,
    0.1133058863621428, 0.2809028632221865, -0.7528160380878561,
    0.5658080673964587, -0.024550152433666563, -0.12018854471079482,
    -0.018156493945546453, 0.03152637712208465, 0.006628794612430063,
    -0.0025761743066007948, -0.0012775586538069982, 0.002411869456666278};
constexpr double qshift_d_g1a[] = {
    0.002284127440270531, 0.0012098941630734423, 0.011834794515430786,
    0.0012834569993443994, -0.044365221606616996, -0.05327610880304726,
    0.1133058863621428, 0.2809028632221865, -0.7528160380878561,
    0.5658080673964587, -0.024550152433666563, -0.12018854471079482,
    -0.018156493945546453, 0.03152637712208465, 0.006628794612430063,
    -0.0025761743066007948, -0.0012775586538069982, 0.002411869456666278};
constexpr double qshift_d_g1b[] = {
    0.002411869456666278, -0.0012775586538069982, -0.0025761743066007948,
    0.006628794612430063, 0.03152637712208465, -0.018156493945546453,
    -0.12018854471079482, -0.024550152433666563, 0.5658080673964587,
    -0.7528160380878561, 0.2809028632221865, 0.1133058863621428,
    -0.05327610880304726, -0.044365221606616996, 0.0012834569993443994,
    0.011834794515430786, 0.0012098941630734423, 0.002284127440270531};
} // namespace

const FirstLevelTaps* find_first_level(std::size_t len) {
    static const FirstLevelTaps a{"near_sym_a", near_sym_a_h0o, near_sym_a_h1o, near_sym_a_g0o, near_sym_a_g1o};
    static const FirstLevelTaps b{"near_sym_b", near_sym_b_h0o, near_sym_b_h1o, near_sym_b_g0o, near_sym_b_g1o};
    if (len == a.h0.size()) return &a;
    if (len == b.h0.size()) return &b;
    return nullptr;
}

const QshiftTaps* find_qshift(std::size_t len) {
    static const QshiftTaps a{"qshift_a", qshift_a_h0a, qshift_a_h0b, qshift_a_h1a, qshift_a_h1b, qshift_a_g0a, qshift_a_g0b, qshift_a_g1a, qshift_a_g1b};
    static const QshiftTaps b{"qshift_b", qshift_b_h0a, qshift_b_h0b, qshift_b_h1a, qshift_b_h1b, qshift_b_g0a, qshift_b_g0b, qshift_b_g1a, qshift_b_g1b};
    static const QshiftTaps c{"qshift_c", qshift_c_h0a, qshift_c_h0b, qshift_c_h1a, qshift_c_h1b, qshift_c_g0a, qshift_c_g0b, qshift_c_g1a, qshift_c_g1b};
    static const QshiftTaps d{"qshift_d", qshift_d_h0a, qshift_d_h0b, qshift_d_h1a, qshift_d_h1b, qshift_d_g0a, qshift_d_g0b, qshift_d_g1a, qshift_d_g1b};
    if (len == a.h0a.size()) return &a;
    if (len == b.h0a.size()) return &b;
    if (len == c.h0a.size()) return &c;
    if (len == d.h0a.size()) return &d;
    return nullptr;
}

} // namespace awsp::detail
