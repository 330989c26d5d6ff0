#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace htsim {

// Fixed-length bundle of physical-layer frames: frames_per_bundle codewords,
// each codeword_bits long, mapped at modulation_order_bits per symbol so the
// bundle always spans bundle_payload_symbols regardless of the modulation.
struct BundleSpec {
    int modulation_order_bits = 0;
    int codeword_bits = 0;
    int symbols_per_frame = 0;
    int frames_per_bundle = 0;
    long bundle_payload_symbols = 0;
};

BundleSpec bundle_composition(int modulation_order_bits, int codeword_bits,
                              long bundle_payload_symbols);

// Row `index` of the Sylvester-Hadamard matrix of the given power-of-two
// length, entries +-1.
std::vector<int> walsh_hadamard(int length, int index);

inline constexpr int kSosfSymbols = 270;
inline constexpr int kSosfSequenceLength = 256;  // Walsh-Hadamard set for SOSF
inline constexpr int kPilotSequenceLength = 32;  // Walsh-Hadamard set for SF-pilots

// Beam-unique marker: Walsh-Hadamard rows overlaid with the common reference
// scrambler. The scrambler is shared by every beam and unimodular, so the
// cross-beam orthogonality of the underlying rows is preserved exactly.
struct BeamSignature {
    std::vector<int> sosf;      // length 256
    std::vector<int> sf_pilot;  // length 32
};

BeamSignature beam_signature(int sosf_index, int pilot_index,
                             std::uint64_t reference_scrambler_seed);

// +-1 scrambler overlay; the reference scrambler restarts at every superframe
// start, the payload scrambler is seeded per beam.
std::vector<int> scrambler_sequence(std::uint64_t seed, int length);

enum class FieldKind { Sosf, SfPilot, P2Pilot, Payload };
enum class ScramblerKind { Reference, Payload };

struct SuperframeField {
    FieldKind kind;
    long offset;
    long length;
    bool precoded;
    ScramblerKind scrambler;
};

struct SuperframeLayout {
    long total_symbols = 0;
    std::vector<SuperframeField> fields;

    long payload_symbols() const;
};

struct SuperframeConfig {
    long total_symbols = 612540;
    int p2_pilot_symbols = 90;  // 0 disables the field
    int pilot_period = 1440;    // payload symbols between SF-pilots; 0 disables
    int pilot_symbols = 36;
};

// Tiles [0, total_symbols) as SOSF | optional P2-pilot | payload chunks with
// SF-pilots interspersed every pilot_period payload symbols. SOSF and
// SF-pilots are not precoded and carry the reference scrambler; P2-pilots and
// payload are precoded and carry the beam's payload scrambler. Rejects
// configurations that cannot tile exactly.
SuperframeLayout build_superframe_layout(const SuperframeConfig& config);

void write_layout_text(const SuperframeLayout& layout, std::ostream& os);

// SNIR -> spectral efficiency steps, ascending in both columns.
struct ModcodTable {
    struct Row {
        double snir_threshold_db;
        double efficiency;  // bits per symbol
    };
    std::vector<Row> rows;

    void validate() const;
};

// Synthetic default: gapped-Shannon efficiency min(5.9, 0.8*log2(1+snir))
// sampled every 0.5 dB from -10 dB to +20 dB. A measured table can be loaded
// from CSV to override it.
ModcodTable default_modcod_table();

// Efficiency of the highest threshold <= snir_db (threshold inclusive);
// 0 below the lowest threshold (outage).
double modcod_lookup(const ModcodTable& table, double snir_db);

ModcodTable load_modcod_csv(std::istream& is);
ModcodTable load_modcod_csv_file(const std::string& path);
void write_modcod_csv(const ModcodTable& table, std::ostream& os);

}  // namespace htsim
