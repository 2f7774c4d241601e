#include "ccosim/nn/dataset.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

#include "ccosim/rng.hpp"

namespace ccosim::nn {

void Dataset::validate() const {
    if (input_dim <= 0 || n_classes <= 0) throw std::invalid_argument("Dataset: empty shape");
    if (train_x.size() != train_y.size() || test_x.size() != test_y.size())
        throw std::invalid_argument("Dataset: feature/label size mismatch");
    for (const auto& v : train_x)
        if (static_cast<int>(v.size()) != input_dim)
            throw std::invalid_argument("Dataset: inconsistent feature width");
}

namespace {

// 8x8 glyphs, one per digit class
const std::array<std::array<const char*, 8>, 10> kGlyphs = {{
    {"..####..", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..####..",
     "........"},
    {"...##...", "..###...", "...##...", "...##...", "...##...", "...##...", "..####..",
     "........"},
    {"..####..", ".#....#.", "......#.", ".....#..", "....#...", "..##....", ".######.",
     "........"},
    {"..####..", ".#....#.", "......#.", "...###..", "......#.", ".#....#.", "..####..",
     "........"},
    {"....##..", "...#.#..", "..#..#..", ".#...#..", ".######.", ".....#..", ".....#..",
     "........"},
    {".######.", ".#......", ".#####..", "......#.", "......#.", ".#....#.", "..####..",
     "........"},
    {"..####..", ".#......", ".#####..", ".#....#.", ".#....#.", ".#....#.", "..####..",
     "........"},
    {".######.", "......#.", ".....#..", "....#...", "...#....", "...#....", "...#....",
     "........"},
    {"..####..", ".#....#.", ".#....#.", "..####..", ".#....#.", ".#....#.", "..####..",
     "........"},
    {"..####..", ".#....#.", ".#....#.", "..#####.", "......#.", "......#.", "..####..",
     "........"},
}};

std::vector<double> render(int digit, int dx, int dy, double amp, double noise_sigma,
                           ccosim::RngStream& rng) {
    std::vector<double> px(64, 0.0);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            const int sr = r - dy;
            const int sc = c - dx;
            double v = 0.0;
            if (sr >= 0 && sr < 8 && sc >= 0 && sc < 8)
                v = kGlyphs[digit][sr][sc] == '#' ? amp : 0.0;
            if (noise_sigma > 0.0) v += rng.normal(0.0, noise_sigma);
            px[r * 8 + c] = std::clamp(v, 0.0, 1.0);
        }
    }
    return px;
}

}  // namespace

Dataset Dataset::bundled_digits(int per_class, double test_fraction, uint64_t seed) {
    if (per_class < 4) throw std::invalid_argument("bundled_digits: per_class too small");
    Dataset d;
    d.input_dim = 64;
    d.n_classes = 10;
    RngStream rng(seed, "dataset.bundled");
    const int n_test = std::max(1, static_cast<int>(per_class * test_fraction));
    for (int digit = 0; digit < 10; ++digit) {
        for (int k = 0; k < per_class; ++k) {
            const int dx = static_cast<int>(rng.next_u64() % 3) - 1;
            const int dy = static_cast<int>(rng.next_u64() % 3) - 1;
            const double amp = rng.uniform(0.55, 1.0);
            auto px = render(digit, dx, dy, amp, 0.17, rng);
            if (k < n_test) {
                d.test_x.push_back(std::move(px));
                d.test_y.push_back(digit);
            } else {
                d.train_x.push_back(std::move(px));
                d.train_y.push_back(digit);
            }
        }
    }
    d.validate();
    return d;
}

namespace {

uint32_t read_be32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

bool load_idx_pair(const std::string& images_path, const std::string& labels_path,
                   std::vector<std::vector<double>>& xs, std::vector<int>& ys) {
    std::ifstream fi(images_path, std::ios::binary);
    std::ifstream fl(labels_path, std::ios::binary);
    if (!fi || !fl) return false;
    if (read_be32(fi) != 0x00000803u) throw std::runtime_error("IDX: bad image magic");
    if (read_be32(fl) != 0x00000801u) throw std::runtime_error("IDX: bad label magic");
    const uint32_t n = read_be32(fi);
    const uint32_t rows = read_be32(fi);
    const uint32_t cols = read_be32(fi);
    if (read_be32(fl) != n) throw std::runtime_error("IDX: image/label count mismatch");
    const size_t dim = size_t(rows) * cols;
    std::vector<unsigned char> buf(dim);
    xs.reserve(n);
    ys.reserve(n);
    for (uint32_t k = 0; k < n; ++k) {
        fi.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim));
        std::vector<double> px(dim);
        for (size_t j = 0; j < dim; ++j) px[j] = buf[j] / 255.0;
        xs.push_back(std::move(px));
        char lab;
        fl.read(&lab, 1);
        ys.push_back(static_cast<unsigned char>(lab));
    }
    if (!fi || !fl) throw std::runtime_error("IDX: truncated file");
    return true;
}

}  // namespace

std::optional<Dataset> Dataset::load_idx(const std::string& dir) {
    Dataset d;
    if (!load_idx_pair(dir + "/train-images-idx3-ubyte", dir + "/train-labels-idx1-ubyte",
                       d.train_x, d.train_y))
        return std::nullopt;
    if (!load_idx_pair(dir + "/t10k-images-idx3-ubyte", dir + "/t10k-labels-idx1-ubyte", d.test_x,
                       d.test_y))
        return std::nullopt;
    d.input_dim = static_cast<int>(d.train_x.front().size());
    d.n_classes = 1 + *std::max_element(d.train_y.begin(), d.train_y.end());
    d.validate();
    return d;
}

}  // namespace ccosim::nn
