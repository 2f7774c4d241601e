#include "ccosim/tdc.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ccosim::tdc {

uint32_t gray_encode(uint32_t n, int width) {
    if (width < 1 || width > 31) throw std::invalid_argument("gray_encode: bad width");
    if (n >= (1u << width)) throw std::overflow_error("gray_encode: value exceeds counter width");
    return n ^ (n >> 1);
}

uint32_t gray_decode(uint32_t code, int width) {
    if (width < 1 || width > 31) throw std::invalid_argument("gray_decode: bad width");
    if (code >= (1u << width)) throw std::overflow_error("gray_decode: code exceeds counter width");
    uint32_t n = code;
    for (uint32_t shift = code >> 1; shift != 0; shift >>= 1) n ^= shift;
    return n;
}

const std::array<PhaseSample, 8>& phase_sequence() {
    // Four square waves offset 45 degrees sampled through one cycle: a Johnson
    // sequence, adjacent states differing in exactly one bit (wrap included).
    static const std::array<PhaseSample, 8> seq = {{
        {{true, false, false, false}},
        {{true, true, false, false}},
        {{true, true, true, false}},
        {{true, true, true, true}},
        {{false, true, true, true}},
        {{false, false, true, true}},
        {{false, false, false, true}},
        {{false, false, false, false}},
    }};
    return seq;
}

PhaseSample phase_sample_at(int index) {
    if (index < 0 || index > 7) throw std::invalid_argument("phase_sample_at: index out of range");
    return phase_sequence()[index];
}

namespace {

int find_legal(const PhaseSample& s) {
    const auto& seq = phase_sequence();
    for (int i = 0; i < 8; ++i)
        if (seq[i] == s) return i;
    return -1;
}

}  // namespace

int phase_encode(const PhaseSample& s) {
    const int idx = find_legal(s);
    if (idx < 0) throw std::invalid_argument("phase_encode: illegal phase sample");
    return idx;
}

PhaseDecode phase_decode(const PhaseSample& s) {
    int idx = find_legal(s);
    if (idx >= 0) return {idx, false};
    // Metastable capture: exactly one bit is corrupt. Flip each bit and take
    // the lowest-index legal neighbour.
    for (int b = 0; b < 4; ++b) {
        PhaseSample t = s;
        t.levels[b] = !t.levels[b];
        idx = find_legal(t);
        if (idx >= 0) return {idx, true};
    }
    throw std::invalid_argument("phase_decode: sample is not within one bit of a legal state");
}

TdcFrame convert(const ring::EdgeStream& edges, double window, const TdcConfig& cfg) {
    if (window < 0.0) throw std::invalid_argument("convert: negative window");
    if (edges.n_stages != 4)
        throw std::invalid_argument("convert: phase counter requires a 4-stage stream");
    if (edges.edges.empty() || edges.duration < window)
        throw std::invalid_argument("convert: edge stream must span the window");
    if (cfg.gc_bits < 1 || cfg.gc_bits > 31) throw std::invalid_argument("convert: bad gc width");

    const uint32_t gc_max = (1u << cfg.gc_bits) - 1;
    uint32_t coarse = 0;
    bool saturated = false;
    int pc = edges.edges.front().phase_step;  // zero-length window latches the initial phase
    int prev_step = -1;
    for (const ring::Edge& e : edges.edges) {
        if (e.time > window) break;
        pc = e.phase_step;
        // phase index 0 is anchored to the coarse-clock phase: the coarse
        // counter ticks on each observed fine-counter wrap
        if (e.phase_step == 0 && prev_step == 7) {
            if (coarse == gc_max) {
                saturated = true;
            } else {
                ++coarse;
            }
        }
        prev_step = e.phase_step;
    }
    TdcFrame frame;
    frame.gc_bits = cfg.gc_bits;
    frame.gc = gray_encode(coarse, cfg.gc_bits);
    frame.pc = static_cast<uint8_t>(pc);
    frame.saturated = saturated;
    return frame;
}

double decode_frequency(const TdcFrame& frame, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("decode_frequency: window must be > 0");
    return static_cast<double>(frame.total_steps()) / (8.0 * window);
}

std::array<uint8_t, 15> piso_serialize(const TdcFrame& frame) {
    std::array<uint8_t, 15> bits{};
    for (int i = 0; i < 12; ++i) bits[i] = (frame.gc >> (11 - i)) & 1u;
    for (int i = 0; i < 3; ++i) bits[12 + i] = (frame.pc >> (2 - i)) & 1u;
    return bits;
}

TdcFrame piso_deserialize(std::span<const uint8_t> bits) {
    if (bits.size() != 15) throw std::invalid_argument("piso_deserialize: need exactly 15 bits");
    TdcFrame frame;
    frame.gc_bits = 12;
    for (int i = 0; i < 12; ++i) frame.gc = (frame.gc << 1) | (bits[i] & 1u);
    for (int i = 0; i < 3; ++i) frame.pc = static_cast<uint8_t>((frame.pc << 1) | (bits[12 + i] & 1u));
    return frame;
}

uint16_t pack_word(const TdcFrame& frame) {
    return static_cast<uint16_t>(((frame.gc & 0xfffu) << 3) | (frame.pc & 0x7u));
}

void write_frames_binary(std::ostream& os, std::span<const TdcFrame> frames) {
    for (const TdcFrame& f : frames) {
        const uint16_t w = pack_word(f);
        const char bytes[2] = {static_cast<char>(w & 0xff), static_cast<char>(w >> 8)};
        os.write(bytes, 2);
    }
}

void write_frames_csv(std::ostream& os, std::span<const TdcFrame> frames, double window) {
    os << "window_s,gc_hex,pc,f_hz\n";
    char buf[96];
    for (const TdcFrame& f : frames) {
        std::snprintf(buf, sizeof(buf), "%.8e,%03x,%d,%.8e\n", window, f.gc,
                      static_cast<int>(f.pc), decode_frequency(f, window));
        os << buf;
    }
}

}  // namespace ccosim::tdc
