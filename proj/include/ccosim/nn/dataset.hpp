#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccosim::nn {

/// Labelled vectors with disjoint train/test splits, features in [0, 1].
struct Dataset {
    int input_dim = 0;
    int n_classes = 0;
    std::vector<std::vector<double>> train_x, test_x;
    std::vector<int> train_y, test_y;

    void validate() const;

    /// Built-in 8x8 digit set: per-class glyphs with deterministic shifts,
    /// amplitude scaling and pixel noise. Stratified split.
    static Dataset bundled_digits(int per_class = 260, double test_fraction = 0.35,
                                  uint64_t seed = 1234);

    /// IDX-format digit images (big-endian magics 0x803/0x801) from dir;
    /// expects the standard four train/t10k file names. Empty optional when
    /// the files are missing.
    static std::optional<Dataset> load_idx(const std::string& dir);
};

}  // namespace ccosim::nn
