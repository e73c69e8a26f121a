#include "chanest/eval/reference_curves.hpp"

namespace chanest::eval::reference {

namespace {

const std::array<double, 101> kAblationNoTc = {{
    0.0, 0.4514, 0.6911, 0.7343, 0.3273, 0.563,
    0.9531, 0.4876, 0.8652, 0.7437, 0.8797, 0.7177,
    0.5443, 0.5274, 0.5757, 0.5296, 0.8217, 0.8768,
    0.5859, 0.5788, 0.6777, 0.8602, 0.7826, 0.7889,
    0.7443, 0.7858, 0.8503, 0.8131, 0.9387, 0.9128,
    0.6607, 0.8368, 0.8241, 0.7805, 0.9621, 0.9067,
    0.9162, 0.8753, 0.9447, 0.9855, 0.87, 0.8186,
    0.9885, 0.8214, 0.938, 0.7821, 0.7252, 0.7831,
    0.6768, 0.769, 0.7762, 0.9257, 0.6766, 0.6428,
    0.6889, 0.7433, 0.808, 0.8027, 0.7301, 0.7462,
    0.8599, 0.5474, 0.7408, 0.828, 0.8374, 0.6679,
    0.6607, 0.7034, 0.7108, 0.7269, 0.6547, 0.7437,
    0.7793, 0.7888, 0.7004, 0.5346, 0.6627, 0.8245,
    0.77, 0.642, 0.7264, 0.8199, 0.6989, 0.6652,
    0.8128, 0.691, 0.705, 0.8991, 0.6465, 0.6508,
    0.6863, 0.6986, 0.7249, 0.8088, 0.7923, 0.737,
    0.8212, 0.4982, 0.8606, 0.5735, 0.856
}};

const std::array<double, 101> kAblationTc = {{
    0.0, 0.0699, 0.1166, 0.1179, 0.086, 0.106,
    0.156, 0.1245, 0.1623, 0.1403, 0.1751, 0.1552,
    0.1634, 0.169, 0.1818, 0.1887, 0.2091, 0.2288,
    0.2253, 0.2309, 0.2414, 0.269, 0.2579, 0.2759,
    0.2881, 0.2959, 0.2815, 0.2926, 0.3049, 0.3157,
    0.3216, 0.3333, 0.3531, 0.3751, 0.3763, 0.386,
    0.3968, 0.3885, 0.4009, 0.4119, 0.4254, 0.4257,
    0.4458, 0.4445, 0.4633, 0.4693, 0.4775, 0.4888,
    0.4968, 0.5002, 0.5078, 0.53, 0.5348, 0.5401,
    0.553, 0.5605, 0.573, 0.5823, 0.5841, 0.5994,
    0.611, 0.6188, 0.6214, 0.6345, 0.646, 0.6543,
    0.6724, 0.6763, 0.6907, 0.6926, 0.7029, 0.7148,
    0.7304, 0.7413, 0.7499, 0.7577, 0.7659, 0.774,
    0.7919, 0.7938, 0.8082, 0.8174, 0.8238, 0.833,
    0.8494, 0.8574, 0.8686, 0.88, 0.883, 0.8902,
    0.9051, 0.9126, 0.9214, 0.933, 0.9444, 0.9543,
    0.9617, 0.9694, 0.9792, 0.9858, 1.0
}};

const std::array<double, 100> kNmse10_ls = {{
    -0.000617, -0.002291, -0.000757, -0.000609, -0.000822, -0.002211,
    -0.000806, -0.000706, -0.003604, -0.000958, -0.000827, -0.003584,
    -0.001106, -0.000889, -0.004287, -0.001324, -0.001952, -0.002008,
    -0.001276, -0.004069, -0.001282, -0.006758, -0.001281, -0.004492,
    -0.002017, -0.002842, -0.001345, -0.001653, -0.001722, -0.001685,
    -0.001834, -0.00191, -0.002203, -0.002218, -0.002104, -0.002217,
    -0.002313, -0.002222, -0.002307, -0.002279, -0.002213, -0.002805,
    -0.003308, -0.005063, -0.005801, -0.007346, -0.012453, -0.015016,
    -0.018296, -0.020561, -0.026017, -0.028353, -0.024943, -0.019379,
    -0.004097, -0.003493, -0.013727, -0.044368, -0.055508, -0.021698,
    -0.011315, -0.065912, -0.084283, -0.023614, -0.205278, -0.234996,
    -0.212312, -2.387584, -7.367558, -8.041702, -7.857262, -9.044137,
    -7.131414, -5.578469, -5.419632, -4.861221, -4.072104, -3.333052,
    -3.040074, -2.224304, -2.291733, -1.623844, -1.618294, -1.144717,
    -1.218503, -0.970388, -1.081243, -0.95542, -0.698751, -0.733436,
    -0.770896, -0.561022, -0.578128, -0.363346, -0.520711, -0.388737,
    -0.342162, -0.400586, -0.365743, -0.314067
}};

const std::array<double, 100> kNmse10_notc = {{
    2.222193, 6.298187, 2.384946, 2.681467, 2.967251, 5.38302,
    2.869824, 2.500989, 4.298987, 3.213342, 2.358105, 5.013164,
    2.990715, 2.755288, 4.51718, 2.786416, 3.57229, 3.256056,
    2.262346, 4.416265, 2.493468, 4.325209, 2.468967, 3.40321,
    2.603723, 3.409704, 2.59964, 2.023127, 2.854516, 2.476099,
    2.580277, 2.320104, 2.507055, 2.417028, 2.283957, 2.650613,
    2.509825, 2.685132, 2.550866, 2.632367, 2.367607, 2.347692,
    2.205905, 2.491459, 2.329313, 2.200996, 2.899381, 2.467519,
    2.018049, 2.870548, 2.095657, 2.362618, 2.021388, 2.145819,
    2.12894, 2.509503, 2.432407, 2.722808, 2.307526, 1.9332,
    1.701711, 2.23321, 1.98743, 2.127191, 1.88988, 2.836223,
    2.394774, 1.016492, -0.99437, -0.827079, -0.616678, -0.704736,
    -0.178153, -0.532882, -0.227083, 0.093942, 0.322313, 1.051241,
    0.611949, 1.192176, 0.86109, 1.93214, 1.267072, 2.056851,
    1.873208, 2.076561, 1.707277, 2.166261, 2.612975, 2.317031,
    2.238459, 2.242282, 2.422913, 2.265106, 2.087184, 2.939907,
    2.913488, 2.76476, 2.380131, 2.796547
}};

const std::array<double, 100> kNmse10_tc = {{
    -7.563859, -0.144552, -4.544632, -5.509899, -5.885967, 0.298622,
    -3.181615, -3.77671, -0.41847, -4.118938, -6.721049, -3.505355,
    -4.561488, -3.355937, -1.601841, -5.394789, -6.665487, -3.823839,
    -4.019122, -3.464281, -3.008473, -1.363634, -3.987235, -3.84117,
    -2.441001, -2.315788, -0.620762, -3.799357, -3.257963, -4.734822,
    -4.162351, -4.912052, -2.601749, -3.350061, -4.378759, -6.429743,
    -7.06147, -8.779309, -5.897053, -6.193592, -8.035561, -3.32827,
    -2.466567, -4.575472, -5.629972, -5.890557, -6.376903, -8.037706,
    -7.112944, -5.514368, -7.114044, -7.517138, -7.378724, -6.79155,
    -8.042958, -8.035018, -10.629262, -8.695235, -7.730317, -11.40105,
    -9.258787, -11.000979, -6.627837, -9.342094, -7.638269, -10.445928,
    -6.611495, -10.539593, -9.301639, -9.074835, -9.089652, -9.039104,
    -10.00027, -7.256028, -10.091014, -10.896651, -11.955518, -11.964598,
    -12.604634, -11.236645, -11.355686, -10.617335, -10.833831, -13.111937,
    -10.848103, -10.074017, -9.879788, -11.4615, -9.133128, -8.979375,
    -11.171991, -10.148769, -9.197551, -7.61364, -10.018095, -7.199815,
    -8.650016, -9.908057, -9.837702, -9.284947
}};

const std::array<double, 100> kNmse10_direct = {{
    -3.959315, -1.348294, -3.87884, -4.660446, -4.516737, 0.062309,
    -3.388763, -2.774313, 0.241435, -3.199618, -5.01927, -2.930508,
    -2.944313, -3.133798, -4.052627, -3.358131, -4.791818, -2.673688,
    -4.071506, -0.157166, -3.21218, -2.063469, -3.783963, -2.51129,
    -3.681763, -3.065961, -4.066188, -3.862576, -3.638048, -3.27395,
    -2.761737, -4.255429, -3.06607, -3.540043, -2.234526, -4.28884,
    -8.139887, -10.572159, -11.248397, -8.321854, -7.588325, -2.396696,
    -5.248928, -8.123966, -6.62175, -3.948334, -10.668119, -11.320151,
    -6.954201, -6.364966, -7.149905, -9.465332, -8.810968, -6.754415,
    -8.539641, -8.481366, -10.088296, -6.135889, -4.496769, -7.98658,
    -10.450658, -9.905854, -5.041632, -7.964253, -7.523311, -8.864819,
    -6.455309, -7.695484, -10.274229, -9.371352, -6.190892, -6.17521,
    -7.767512, -8.537618, -7.042136, -11.987805, -17.42357, -16.521394,
    -18.75901, -19.088722, -19.305691, -18.816731, -18.091515, -18.431303,
    -18.072386, -18.663878, -14.833785, -18.693385, -15.824921, -17.239788,
    -17.536302, -14.533445, -17.095023, -16.498546, -18.695158, -16.283035,
    -16.3993, -17.842603, -18.161158, -16.539144
}};

const std::array<double, 100> kNmse20_ls = {{
    -3.9e-05, -0.000158, -3.4e-05, -2.4e-05, -6.5e-05, -0.000101,
    -3.1e-05, -4.2e-05, -0.00025, -5e-05, -4.3e-05, -0.000267,
    -6.1e-05, -7.6e-05, -0.000192, -7.6e-05, -0.000216, -9.5e-05,
    -0.000119, -0.000179, -0.000124, -0.000314, -0.000104, -0.000239,
    -0.000183, -0.000224, -4.8e-05, -4.4e-05, -3.6e-05, -4.8e-05,
    -6.6e-05, -8.9e-05, -9.2e-05, -0.000125, -0.000128, -0.000168,
    -0.000206, -0.000234, -0.000268, -0.000307, -0.000352, -0.000439,
    -0.000712, -0.000859, -0.000954, -0.00104, -0.001023, -0.000976,
    -0.000746, -0.000455, -0.000358, -0.001092, -0.002111, -0.00277,
    -0.000175, -0.00141, -0.004647, -0.00414, -0.007497, -0.004834,
    -0.006306, -0.010217, -0.026972, -0.016373, -0.009702, -0.103151,
    -0.246433, -0.189945, -8.937861, -7.224475, -7.831209, -8.603885,
    -1.438791, -0.112133, -0.207695, -0.008204, -0.122256, -0.058515,
    -0.092827, -0.077797, -0.093534, -0.053078, -0.148068, -0.041644,
    -0.116674, -0.058941, -0.028843, -0.048375, -0.00568, -0.003247,
    -0.001849, -0.004135, -0.008257, -0.009731, -0.011431, -0.004391,
    -0.002734, -0.001741, -0.000904, -0.00092
}};

const std::array<double, 100> kNmse20_notc = {{
    3.01097, 3.643123, 3.105086, 2.895995, 3.610352, 3.946251,
    3.097804, 3.219187, 3.954395, 3.120048, 2.873611, 3.317758,
    3.094536, 3.001831, 3.902338, 2.759365, 3.85674, 3.065252,
    3.148924, 3.442711, 2.835694, 3.501174, 2.907952, 3.092465,
    2.811197, 2.948936, 2.830492, 3.18841, 2.612222, 3.059454,
    2.515774, 3.025725, 2.631413, 2.783514, 3.25464, 2.62325,
    3.168088, 2.738617, 2.543645, 3.411505, 3.025198, 2.36301,
    2.96885, 2.751666, 2.959281, 2.615379, 2.562928, 2.545311,
    2.730403, 2.645372, 3.015541, 2.848482, 2.756628, 2.438753,
    2.657625, 2.705269, 2.499814, 2.51494, 2.30827, 2.73685,
    2.966607, 2.684545, 2.817932, 2.778264, 2.512157, 2.654712,
    2.452255, 2.754607, 0.138563, 0.537755, 0.235293, 0.336838,
    2.131631, 2.897183, 2.777012, 2.89676, 2.811029, 2.852447,
    2.682585, 2.849636, 2.958019, 3.009394, 2.889143, 2.904556,
    3.083849, 3.168144, 2.979217, 2.869782, 3.051994, 3.262383,
    3.316503, 3.284719, 3.27375, 3.505389, 3.262338, 3.471251,
    3.733316, 3.61328, 3.808387, 3.811436
}};

const std::array<double, 100> kNmse20_tc = {{
    -1.6749, 2.295817, -1.932829, -4.353256, -3.503608, 0.890393,
    -2.667046, -0.956206, -0.14803, -2.533773, -3.048245, -0.325214,
    -1.921763, -2.618001, -1.269111, -2.631953, -3.468077, -3.768583,
    -2.38206, -1.415207, -2.251508, -2.453587, -2.097865, -3.350105,
    -1.788724, -2.852348, -2.00524, -1.046548, -1.165125, -1.098125,
    -1.590016, -1.120095, -0.911498, -1.112243, -0.950671, -3.087347,
    -4.246845, -5.39677, -4.884897, -5.272074, -3.655181, -0.070388,
    0.091565, -2.289505, -3.65235, -2.746713, -3.646649, -5.07712,
    -3.987301, -3.418615, -2.926222, -3.115308, -6.38014, -2.967375,
    -4.913346, -5.567457, -7.883551, -6.129896, -4.495529, -5.236466,
    -5.354229, -5.960511, -3.305909, -3.701979, -5.880681, -7.350989,
    -6.615383, -4.904879, -6.99591, -6.713386, -3.795203, -5.435851,
    -4.654892, -4.959881, -4.562402, -6.70154, -7.428493, -9.575022,
    -9.399738, -8.974024, -10.189881, -5.672887, -7.454691, -7.695272,
    -8.092739, -6.417754, -7.814346, -7.797095, -6.059252, -7.377096,
    -4.512467, -7.290771, -6.82594, -4.276972, -6.266649, -3.360437,
    -6.700144, -7.250422, -5.903731, -5.556371
}};

const std::array<double, 100> kNmse20_direct = {{
    -0.114628, 1.473912, -0.710854, -3.012615, -2.308821, 0.540987,
    -1.903284, -0.583456, 0.983717, 0.228695, -0.26441, 0.713556,
    -2.43288, 0.35447, -1.918762, -2.100665, -2.922263, -1.846506,
    -0.102097, 0.407275, 0.134666, 0.357798, -1.090166, 0.492669,
    0.479192, -0.183899, 0.208857, -1.255937, 0.809142, -0.733538,
    -0.179535, -1.987652, 0.099219, 0.778255, 0.022712, -2.311374,
    -4.695666, -4.888973, -4.419097, -3.332135, -2.827143, -0.578906,
    -0.67071, -2.847735, -2.535894, -1.906364, -1.739952, -2.877162,
    -2.300235, -0.42268, -2.541228, -3.244054, -2.603574, -1.233582,
    -1.038793, -1.170569, -0.852845, -0.541534, 0.271932, 0.4125,
    0.182986, 0.499581, -0.048175, 0.301351, 0.2067, -0.409436,
    -0.731106, -1.191832, -4.6478, -3.918375, -2.702848, -3.66922,
    -0.118071, 1.167066, -2.957137, -4.747941, -3.885125, -5.450808,
    -8.938571, -11.121973, -9.982281, -10.132299, -10.212283, -8.769229,
    -11.870196, -5.652071, -8.042354, -10.033696, -4.78491, -4.175076,
    -7.771653, -5.319883, -6.109467, -6.544441, -6.535993, -6.037486,
    -5.770957, -7.338992, -6.421437, -6.989059
}};

}  // namespace

AblationCurves ablation_curves() {
    AblationCurves c;
    c.dist_no_tc.assign(kAblationNoTc.begin(), kAblationNoTc.end());
    c.dist_tc.assign(kAblationTc.begin(), kAblationTc.end());
    return c;
}

NmseCurves nmse_curves_10x10() {
    NmseCurves c;
    c.nmse_ls.assign(kNmse10_ls.begin(), kNmse10_ls.end());
    c.nmse_tc.assign(kNmse10_tc.begin(), kNmse10_tc.end());
    c.nmse_notc.assign(kNmse10_notc.begin(), kNmse10_notc.end());
    c.nmse_direct.assign(kNmse10_direct.begin(), kNmse10_direct.end());
    return c;
}

NmseCurves nmse_curves_20x20() {
    NmseCurves c;
    c.nmse_ls.assign(kNmse20_ls.begin(), kNmse20_ls.end());
    c.nmse_tc.assign(kNmse20_tc.begin(), kNmse20_tc.end());
    c.nmse_notc.assign(kNmse20_notc.begin(), kNmse20_notc.end());
    c.nmse_direct.assign(kNmse20_direct.begin(), kNmse20_direct.end());
    return c;
}

}  // namespace chanest::eval::reference
