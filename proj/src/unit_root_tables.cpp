// GENERATED by tools/calibrate_tables.cpp - do not edit by hand.
// Regenerate:  calibrate_tables --seed 20240817 --out-dir <dir>  (then copy over src/)
// Pooled-t* adjustments: 200k driftless random walks per cell (100k for T~ >= 150), lag 0,
// through unit_root_detail::llc_ingredients. Group-mean t moments: 100k walks per cell
// (50k for lag >= 5) through unit_root_detail::adf_tstat_fixed at fixed lag.

#include "panelbreak/unit_root_tables.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace panelbreak::unit_root_tables {

namespace {

using stats::Deterministic;

int det_index(Deterministic det) {
    switch (det) {
        case Deterministic::none: return 0;
        case Deterministic::constant: return 1;
        case Deterministic::constant_trend: return 2;
    }
    return 1;
}

// Linear interpolation over an ascending grid, clamped at both ends.
template <std::size_t N>
double interp(const std::array<double, N>& xs, const double (&ys)[N], double x) {
    if (x <= xs.front()) return ys[0];
    if (x >= xs.back()) return ys[N - 1];
    std::size_t hi = 1;
    while (hi < N - 1 && xs[hi] < x) ++hi;
    const double x0 = xs[hi - 1], x1 = xs[hi];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * ys[hi - 1] + w * ys[hi];
}

constexpr std::array<double, 14> kLlcGrid = {20,  25,  30,  35,  40, 45, 50,
                                             60,  70,  80,  90,  100, 150, 250};

constexpr double kLlcMu[3][14] = {
    {0.009596782924, 0.005492252884, 0.005242973533, 0.002522595804, -9.088753077e-05, 0.001677162971, 0.003322071129, 0.0003814789292, 0.00208944782, 0.001589605971, 0.0007522282735, -0.0007319862625, -0.002643758009, 0.0002910083751},
    {-0.6067944807, -0.5820559557, -0.5800512381, -0.5670602581, -0.558536165, -0.5506334217, -0.5446648407, -0.5372149496, -0.5311230886, -0.5283185441, -0.5243521307, -0.5264642112, -0.5175297575, -0.5101232194},
    {-0.6160776311, -0.5890982157, -0.5866222325, -0.5727441141, -0.5620056823, -0.5552218291, -0.5491957512, -0.5403431006, -0.5338283771, -0.5293718848, -0.5265033639, -0.5268007449, -0.5177614906, -0.5106445764},
};

constexpr double kLlcSigma[3][14] = {
    {1.063802236, 1.051082373, 1.042293825, 1.03743674, 1.02840307, 1.022199923, 1.023415814, 1.017473633, 1.017619866, 1.012855514, 1.012841446, 1.005437712, 0.9965147601, 1.007310623},
    {0.8867967204, 0.8411761084, 0.8282853715, 0.8110314792, 0.7955596287, 0.7899016317, 0.77793551, 0.7633243828, 0.7587650662, 0.7515854286, 0.7474145377, 0.7405091611, 0.7322685295, 0.7211193789},
    {0.8647727948, 0.7759709985, 0.7593118315, 0.7190790444, 0.6886273623, 0.6638793553, 0.6465834216, 0.6191737233, 0.6012743155, 0.5866188204, 0.5779849085, 0.5806618913, 0.5529336258, 0.5339084131},
};

constexpr std::array<double, 12> kIpsGrid = {15, 20, 25, 30, 40, 50, 60, 70, 100, 150, 200, 400};

constexpr double kIpsMean[3][12][9] = {
    {
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0},
    },
    {
        {-1.509257771, -1.501378925, -1.356970085, -1.321912121, -1.178168372, -1.370923647, -1.370923647, -1.370923647, -1.370923647},
        {-1.514680866, -1.509749728, -1.405606198, -1.371996455, -1.260843281, -1.226306819, -1.10121583, -1.114911719, -4.948025865},
        {-1.518037916, -1.510890335, -1.430514638, -1.409524332, -1.329234848, -1.303136795, -1.203921847, -1.167271052, -1.076570245},
        {-1.519380121, -1.51664191, -1.45271306, -1.441544252, -1.361358509, -1.34943177, -1.268724175, -1.244518954, -1.160930851},
        {-1.518499462, -1.521752672, -1.474797839, -1.460169948, -1.419199536, -1.40467377, -1.344703342, -1.326601347, -1.26810128},
        {-1.528570583, -1.525504134, -1.482559618, -1.482611377, -1.444691089, -1.430944024, -1.389911539, -1.381083723, -1.335375555},
        {-1.52754938, -1.532906161, -1.495031443, -1.489489514, -1.462260236, -1.447077164, -1.412075269, -1.407675713, -1.374817017},
        {-1.528324235, -1.526435876, -1.496962498, -1.49672073, -1.471710046, -1.466247438, -1.440572473, -1.432584915, -1.397817354},
        {-1.531775344, -1.528000608, -1.512727061, -1.506596219, -1.490678164, -1.489192261, -1.4689639, -1.46241532, -1.442416},
        {-1.531504414, -1.531726327, -1.518722846, -1.51845378, -1.50371851, -1.497395843, -1.492805748, -1.486947058, -1.48206478},
        {-1.532605943, -1.532008813, -1.522450353, -1.519850439, -1.508741588, -1.50780217, -1.498576851, -1.496669974, -1.493788611},
        {-1.530340109, -1.531805438, -1.528828808, -1.528637556, -1.523162548, -1.519953411, -1.518899374, -1.524023499, -1.513483851},
    },
    {
        {-2.162108218, -2.162212119, -1.948093303, -1.917011223, -1.749731162, -9.33822222, -9.33822222, -9.33822222, -9.33822222},
        {-2.172777324, -2.164704131, -2.023435392, -1.992573039, -1.823197632, -1.782356788, -1.62457264, -1.866638235, -1.866638235},
        {-2.168453436, -2.172058438, -2.0671507, -2.041642525, -1.907658265, -1.86874324, -1.74088342, -1.691609386, -1.549320222},
        {-2.173797722, -2.173987855, -2.081735574, -2.073633764, -1.971374717, -1.943539385, -1.825814905, -1.791532449, -1.674798578},
        {-2.171440627, -2.177869929, -2.113620588, -2.113452829, -2.038871355, -2.020851488, -1.952612083, -1.930857786, -1.836964512},
        {-2.174289813, -2.176028882, -2.131076946, -2.127647544, -2.072243934, -2.066342042, -2.001236537, -1.993065755, -1.928860607},
        {-2.179714644, -2.180520425, -2.139947443, -2.143305897, -2.091717429, -2.09076613, -2.044877562, -2.037387896, -1.986380211},
        {-2.174971715, -2.178398976, -2.145880778, -2.139841781, -2.106160809, -2.109873762, -2.069465735, -2.062729397, -2.025114957},
        {-2.178157061, -2.177912824, -2.159097293, -2.159374385, -2.132755467, -2.137519035, -2.103512802, -2.10214825, -2.07893166},
        {-2.178301873, -2.180034371, -2.164774523, -2.167000464, -2.152750457, -2.149929239, -2.131497734, -2.134274484, -2.120924158},
        {-2.182548318, -2.183466913, -2.167416071, -2.170082353, -2.158365935, -2.161149662, -2.146053534, -2.146692709, -2.142386614},
        {-2.181586978, -2.17838565, -2.175346215, -2.174465474, -2.169756997, -2.175218476, -2.165373297, -2.168475263, -2.164695211},
    },
};

constexpr double kIpsVar[3][12][9] = {
    {
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1},
    },
    {
        {0.924130989, 1.0770277, 1.224370364, 1.525511411, 2.079995178, 12.99141199, 12.99141199, 12.99141199, 12.99141199},
        {0.8685203114, 0.9389737189, 1.028526264, 1.153432053, 1.281403349, 1.486460263, 1.828924218, 3.319392222, 88183.44839},
        {0.823775879, 0.8761457343, 0.9343009576, 1.015610573, 1.094068764, 1.205888571, 1.326943568, 1.482364043, 1.691632141},
        {0.8013822405, 0.8467432573, 0.894349454, 0.9399098591, 1.011567643, 1.075344195, 1.164728121, 1.247825354, 1.342361823},
        {0.7754858719, 0.7972310793, 0.8315254151, 0.8649335758, 0.9040406267, 0.947853754, 1.006739354, 1.05536782, 1.096557746},
        {0.7577452417, 0.7751564785, 0.8044442794, 0.8285133945, 0.8626958284, 0.8933819294, 0.9271922691, 0.9595171559, 0.9983737946},
        {0.7543455412, 0.7709051552, 0.778515197, 0.8114631817, 0.830228511, 0.8510318791, 0.8799555636, 0.8969737472, 0.9338055397},
        {0.7479427743, 0.7572174146, 0.7716386367, 0.7959961627, 0.8162876004, 0.8234413587, 0.8497567156, 0.8791181212, 0.8959645889},
        {0.7299790451, 0.7376133769, 0.7561459095, 0.7723327362, 0.7739514949, 0.7923240984, 0.8002783751, 0.8108256312, 0.8259623801},
        {0.7298834411, 0.7308361997, 0.743587497, 0.7448142575, 0.7541032992, 0.7603495818, 0.7674824145, 0.7760601507, 0.7912069301},
        {0.7216691937, 0.7286327183, 0.7332156407, 0.7363141065, 0.7410500818, 0.7417472931, 0.7596531175, 0.7528382902, 0.7562409537},
        {0.715127567, 0.7155246461, 0.7152696704, 0.7163959812, 0.7198610093, 0.731771938, 0.7301153747, 0.7275793802, 0.7419835885},
    },
    {
        {0.894179549, 1.095618628, 1.297102258, 1.914968449, 3.714916054, 155517.7874, 155517.7874, 155517.7874, 155517.7874},
        {0.7867197213, 0.8845996666, 0.9620147521, 1.151362982, 1.349586367, 1.75060535, 2.422040894, 13.91595599, 13.91595599},
        {0.7253712398, 0.7853455264, 0.8386104727, 0.9477262577, 1.048313573, 1.204131622, 1.386953808, 1.687332152, 2.051155266},
        {0.695159224, 0.7455654516, 0.774936288, 0.8482382441, 0.9149048018, 1.027842579, 1.118919317, 1.275020905, 1.407783771},
        {0.6568771341, 0.6900413973, 0.714208208, 0.7505720183, 0.7881796666, 0.8419720853, 0.8912889921, 0.985219854, 1.041402921},
        {0.632968655, 0.6580255891, 0.6788421016, 0.7021533829, 0.7311862853, 0.7657278967, 0.808906803, 0.8475612586, 0.8892813158},
        {0.6214487423, 0.641588815, 0.6544919307, 0.672380414, 0.6889145757, 0.7200893041, 0.7506314982, 0.7703542674, 0.8043328841},
        {0.6150363817, 0.6259978352, 0.6355773663, 0.6577547967, 0.6677412748, 0.6971992094, 0.7070594179, 0.735056761, 0.7635800023},
        {0.5998373772, 0.6011579038, 0.6172932212, 0.6268461898, 0.6333330516, 0.6435864726, 0.6488433259, 0.6696822354, 0.6742066124},
        {0.5840743606, 0.5959437123, 0.5998832399, 0.5987554649, 0.6057941966, 0.6096600482, 0.6215524277, 0.6367778848, 0.6375099536},
        {0.5807400272, 0.5880594968, 0.5802237961, 0.594121009, 0.5974326205, 0.6016190399, 0.5997194765, 0.6106064569, 0.6179676695},
        {0.5685792868, 0.5717705171, 0.5708716075, 0.5768936869, 0.5766236927, 0.5772168834, 0.5806521645, 0.5886168695, 0.5883113794},
    },
};

}  // namespace

LlcAdjustment llc_adjustment(Deterministic det, double t_tilde) {
    const int d = det_index(det);
    return {interp(kLlcGrid, kLlcMu[d], t_tilde), interp(kLlcGrid, kLlcSigma[d], t_tilde)};
}

IpsMoments ips_moments(Deterministic det, int series_len, int lags) {
    const int d = det_index(det);
    const int l = std::clamp(lags, 0, 8);
    double mean_col[12], var_col[12];
    for (int i = 0; i < 12; ++i) {
        mean_col[i] = kIpsMean[d][i][l];
        var_col[i] = kIpsVar[d][i][l];
    }
    const double len = static_cast<double>(series_len);
    return {interp(kIpsGrid, mean_col, len), interp(kIpsGrid, var_col, len)};
}

}  // namespace panelbreak::unit_root_tables
