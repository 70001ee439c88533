#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace chainsync::scenario {

class BundleMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CompareResult {
    /// INI-structured side-by-side report.
    std::string text;
    /// Every compared statistic and histogram bin is equal.
    bool identical = true;
};

/// Side-by-side statistics and histogram deltas of two run bundles. Throws
/// BundleMismatch when the bundles come from different topologies or topic
/// sets, std::runtime_error when a bundle is unreadable.
[[nodiscard]] CompareResult compare_bundles(const std::filesystem::path& a, const std::filesystem::path& b);

} // namespace chainsync::scenario
