// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace awsp::detail {

struct FirstLevelTaps {
    std::string_view name;
    std::span<const double> h0, h1, g0, g1;
};

struct QshiftTaps {
    std::string_view name;
    std::span<const double> h0a, h0b, h1a, h1b, g0a, g0b, g1a, g1b;
};

// Lookup by analysis lowpass length; nullptr when no set matches.
const FirstLevelTaps* find_first_level(std::size_t len);
const QshiftTaps* find_qshift(std::size_t len);

} // namespace awsp::detail
