// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <deque>
#include <stdexcept>
#include <string>

namespace factfix::testkit {

/// Replays fixed draws. Running out of script is a test bug and throws.
struct ScriptedSampler {
    std::deque<std::size_t> indices;
    std::deque<double> reals;

    std::size_t uniform_index(std::size_t n) {
        if (indices.empty()) throw std::logic_error("scripted sampler ran out of indices");
        const std::size_t i = indices.front();
        indices.pop_front();
        if (i >= n) throw std::logic_error("scripted index " + std::to_string(i) + " >= " + std::to_string(n));
        return i;
    }

    double uniform01() {
        if (reals.empty()) throw std::logic_error("scripted sampler ran out of reals");
        const double x = reals.front();
        reals.pop_front();
        return x;
    }
};

}  // namespace factfix::testkit
