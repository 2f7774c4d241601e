#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ccosim/ring_sim.hpp"

namespace ccosim::tdc {

/// Binary-reflected Gray code, code = n XOR (n >> 1). Throws on width overflow.
uint32_t gray_encode(uint32_t n, int width = 12);
uint32_t gray_decode(uint32_t code, int width = 12);

/// Levels of the four CCO output phases (45 degree spacing) at one instant.
/// Legal samples walk an 8-state Johnson sequence, one bit per step.
struct PhaseSample {
    std::array<bool, 4> levels{};

    bool operator==(const PhaseSample&) const = default;
};

/// The 8 legal samples in temporal order; index 0 anchors the coarse-clock
/// phase.
const std::array<PhaseSample, 8>& phase_sequence();

/// Sample for a given 45-degree step index (0..7).
PhaseSample phase_sample_at(int index);

struct PhaseDecode {
    int index = 0;
    bool corrected = false;  ///< true when a metastable (illegal) capture was repaired
};

/// Index of a legal sample; throws std::invalid_argument for illegal samples.
int phase_encode(const PhaseSample& s);

/// Like phase_encode but resolves illegal captures to the nearest legal state
/// by single-bit correction (a metastable capture corrupts at most the one
/// transitioning bit).
PhaseDecode phase_decode(const PhaseSample& s);

struct TdcConfig {
    int gc_bits = 12;  ///< coarse Gray counter width
};

/// One conversion: Gray-coded coarse cycle count plus 3-bit phase code.
struct TdcFrame {
    uint32_t gc = 0;
    uint8_t pc = 0;
    bool saturated = false;
    int gc_bits = 12;

    long total_steps() const { return 8l * gray_decode(gc, gc_bits) + pc; }
};

/// Convert an edge stream over the given window. The coarse counter ticks on
/// the opposite phase of the last PC-CNT phase (step index 2N-1); pc latches
/// the phase index at window close. The stream must span the window.
TdcFrame convert(const ring::EdgeStream& edges, double window, const TdcConfig& cfg = {});

/// f_hat = total_steps / (8 * window)
double decode_frequency(const TdcFrame& frame, double window);

/// 15-bit PISO frame: gc MSB-first (bits 14..3), then pc MSB-first (bits 2..0).
std::array<uint8_t, 15> piso_serialize(const TdcFrame& frame);
TdcFrame piso_deserialize(std::span<const uint8_t> bits);

/// 15-bit word packed into a 16-bit little-endian unit, top bit zero.
uint16_t pack_word(const TdcFrame& frame);
void write_frames_binary(std::ostream& os, std::span<const TdcFrame> frames);

/// CSV: window_s,gc_hex,pc,f_hz
void write_frames_csv(std::ostream& os, std::span<const TdcFrame> frames, double window);

}  // namespace ccosim::tdc
