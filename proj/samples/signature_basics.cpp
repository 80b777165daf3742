/* Copyright 2026 The itosig Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ========================================================================= */

// Itô and Stratonovich signatures of a short 2D path, the level-2
// bracket correction, and the Itô-to-Stratonovich functional.

#include <cstdio>

#include "itosig/signature.hpp"
#include "itosig/tensor.hpp"

using namespace itosig;

int main() {
    SamplePath const path({0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.0, 0.4, -0.1, 0.1, 0.3, -0.2, 0.5, 0.3, 0.2}, 2);
    auto const ito = gamma_signature(path, 0.0, 2);
    auto const strat = gamma_signature(path, 0.5, 2);
    auto const qv = quadratic_variation(path, 0.0);
    auto const end = path.points() - 1;

    std::printf("word  ito         strat       strat-ito   qv/2\n");
    for (Letter i = 0; i < 2; ++i) {
        for (Letter j = 0; j < 2; ++j) {
            Word const w{i, j};
            double const a = ito.coeff(end, w);
            double const b = strat.coeff(end, w);
            std::printf("%-5s %+.8f %+.8f %+.8f %+.8f\n", to_string(w).c_str(), a, b, b - a, 0.5 * qv.at(end, i, j));
        }
    }

    // <e_I, Itô signature> and <ℓ^I, Stratonovich signature> on the path with bracket
    // letters; the two agree in the limit of grid refinement, not on a coarse grid
    auto const aug = augment_path(path, 0.0, false, true);
    auto const ito_aug = gamma_signature(aug, 0.0, 3).end();
    Word const I{0, 1, 1};
    auto const ell = ito_strat_functional(aug.alphabet(), I, 3);
    auto const strat_aug = gamma_signature(aug, 0.5, 3).end();
    std::printf("\nell^I for I = %s:\n", to_string(I).c_str());
    auto const& terms = ell.terms();
    for (auto const& [w, coef] : terms) {
        std::printf("  %+.2f e_%s\n", coef, to_string(w).c_str());
    }
    std::printf("<e_I, Ito> = %+.8f, <ell^I, Strat> = %+.8f\n", ito_aug.coeff(I), pair(ell, strat_aug));
    return 0;
}
