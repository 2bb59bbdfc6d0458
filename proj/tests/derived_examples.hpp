#pragma once

#include <functional>
#include <string>
#include <vector>

namespace derived {

/// A worked example checked against an independent oracle. `run` returns an
/// empty string on success and a description of the mismatch otherwise.
struct Example {
    std::string name;
    std::function<std::string()> run;
};

const std::vector<Example>& examples();

}  // namespace derived
