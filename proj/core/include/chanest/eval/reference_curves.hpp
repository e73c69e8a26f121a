#pragma once

#include <array>
#include <vector>

namespace chanest::eval::reference {

// Full-scale reference trajectories (10x10 / 20x20 BS UPA, ray-traced urban
// scene, overhead 96). Shipped so synthetic runs can be compared
// qualitatively against the published behavior; they are shapes to compare
// against, not targets the synthetic scene reproduces pointwise.

struct AblationCurves {
    std::vector<double> dist_no_tc;  // t = 0..100
    std::vector<double> dist_tc;
};

struct NmseCurves {
    std::vector<double> nmse_ls;  // t = 1..100, dB
    std::vector<double> nmse_tc;
    std::vector<double> nmse_notc;
    std::vector<double> nmse_direct;
};

AblationCurves ablation_curves();
NmseCurves nmse_curves_10x10();
NmseCurves nmse_curves_20x20();

}  // namespace chanest::eval::reference
