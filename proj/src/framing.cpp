#include "htsim/framing.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "htsim/rng.hpp"

namespace htsim {

BundleSpec bundle_composition(int modulation_order_bits, int codeword_bits,
                              long bundle_payload_symbols) {
    if (modulation_order_bits < 1)
        throw std::invalid_argument("bundle_composition: modulation order must be >= 1 bit");
    if (codeword_bits < 1 || bundle_payload_symbols < 1)
        throw std::invalid_argument("bundle_composition: sizes must be positive");
    if (codeword_bits % modulation_order_bits != 0)
        throw std::invalid_argument(
            "bundle_composition: codeword of " + std::to_string(codeword_bits) +
            " bits is not divisible by " + std::to_string(modulation_order_bits) +
            " bits/symbol");
    const int symbols_per_frame = codeword_bits / modulation_order_bits;
    if (bundle_payload_symbols % symbols_per_frame != 0)
        throw std::invalid_argument(
            "bundle_composition: bundle of " + std::to_string(bundle_payload_symbols) +
            " symbols is not divisible by the " + std::to_string(symbols_per_frame) +
            "-symbol frame");
    BundleSpec spec;
    spec.modulation_order_bits = modulation_order_bits;
    spec.codeword_bits = codeword_bits;
    spec.symbols_per_frame = symbols_per_frame;
    spec.frames_per_bundle = static_cast<int>(bundle_payload_symbols / symbols_per_frame);
    spec.bundle_payload_symbols = bundle_payload_symbols;
    return spec;
}

std::vector<int> walsh_hadamard(int length, int index) {
    if (length < 1 || (length & (length - 1)) != 0)
        throw std::invalid_argument("walsh_hadamard: length must be a power of two");
    if (index < 0 || index >= length)
        throw std::invalid_argument("walsh_hadamard: index out of range");
    std::vector<int> row(length);
    for (int j = 0; j < length; ++j)
        row[j] = (std::popcount(static_cast<unsigned>(index & j)) & 1) ? -1 : 1;
    return row;
}

std::vector<int> scrambler_sequence(std::uint64_t seed, int length) {
    Rng rng(derive_seed(seed, stream::kScrambler));
    std::vector<int> seq(length);
    for (int i = 0; i < length; ++i) seq[i] = (rng.next_u64() & 1) ? -1 : 1;
    return seq;
}

BeamSignature beam_signature(int sosf_index, int pilot_index,
                             std::uint64_t reference_scrambler_seed) {
    if (sosf_index < 0 || sosf_index >= kSosfSequenceLength)
        throw std::invalid_argument("beam_signature: sosf_index out of range");
    if (pilot_index < 0 || pilot_index >= kPilotSequenceLength)
        throw std::invalid_argument("beam_signature: pilot_index out of range");

    // common scrambler, restarted at each superframe start: one contiguous
    // stream covering the SOSF sequence then the pilot sequence
    const std::vector<int> scr =
        scrambler_sequence(reference_scrambler_seed, kSosfSequenceLength + kPilotSequenceLength);

    BeamSignature sig;
    sig.sosf = walsh_hadamard(kSosfSequenceLength, sosf_index);
    for (int i = 0; i < kSosfSequenceLength; ++i) sig.sosf[i] *= scr[i];
    sig.sf_pilot = walsh_hadamard(kPilotSequenceLength, pilot_index);
    for (int i = 0; i < kPilotSequenceLength; ++i) sig.sf_pilot[i] *= scr[kSosfSequenceLength + i];
    return sig;
}

long SuperframeLayout::payload_symbols() const {
    long n = 0;
    for (const SuperframeField& f : fields)
        if (f.kind == FieldKind::Payload) n += f.length;
    return n;
}

SuperframeLayout build_superframe_layout(const SuperframeConfig& config) {
    if (config.p2_pilot_symbols < 0 || config.pilot_period < 0 || config.pilot_symbols < 0)
        throw std::invalid_argument("superframe: field lengths must be non-negative");
    if (config.pilot_period > 0 && config.pilot_symbols == 0)
        throw std::invalid_argument("superframe: pilot_period set but pilot_symbols is zero");

    SuperframeLayout layout;
    layout.total_symbols = config.total_symbols;
    long pos = 0;
    auto emit = [&](FieldKind kind, long length, bool precoded, ScramblerKind scrambler) {
        layout.fields.push_back({kind, pos, length, precoded, scrambler});
        pos += length;
    };

    long remaining = config.total_symbols - kSosfSymbols - config.p2_pilot_symbols;
    if (remaining <= 0)
        throw std::invalid_argument("superframe: total_symbols too small for SOSF and P2 fields");

    emit(FieldKind::Sosf, kSosfSymbols, false, ScramblerKind::Reference);
    if (config.p2_pilot_symbols > 0)
        emit(FieldKind::P2Pilot, config.p2_pilot_symbols, true, ScramblerKind::Payload);

    while (remaining > 0) {
        const long chunk =
            config.pilot_period > 0 ? std::min<long>(config.pilot_period, remaining) : remaining;
        emit(FieldKind::Payload, chunk, true, ScramblerKind::Payload);
        remaining -= chunk;
        if (remaining > 0) {
            if (remaining <= config.pilot_symbols)
                throw std::invalid_argument(
                    "superframe: cannot tile total_symbols; a pilot field would have no payload "
                    "after it");
            emit(FieldKind::SfPilot, config.pilot_symbols, false, ScramblerKind::Reference);
            remaining -= config.pilot_symbols;
        }
    }
    return layout;
}

void write_layout_text(const SuperframeLayout& layout, std::ostream& os) {
    static const char* names[] = {"SOSF", "SF-PILOT", "P2-PILOT", "PAYLOAD"};
    os << "total_symbols " << layout.total_symbols << '\n';
    for (const SuperframeField& f : layout.fields)
        os << names[static_cast<int>(f.kind)] << ' ' << f.offset << ' ' << f.length << ' '
           << (f.precoded ? "precoded" : "plain") << ' '
           << (f.scrambler == ScramblerKind::Reference ? "reference" : "payload") << '\n';
}

void ModcodTable::validate() const {
    if (rows.empty()) throw std::invalid_argument("modcod table: empty");
    if (rows.front().snir_threshold_db > -10.0)
        throw std::invalid_argument(
            "modcod table: lowest threshold must extend to -10 dB or below");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!std::isfinite(rows[i].snir_threshold_db) || !std::isfinite(rows[i].efficiency) ||
            rows[i].efficiency <= 0.0)
            throw std::invalid_argument("modcod table: rows must be finite with efficiency > 0");
        if (i > 0 && (rows[i].snir_threshold_db <= rows[i - 1].snir_threshold_db ||
                      rows[i].efficiency <= rows[i - 1].efficiency))
            throw std::invalid_argument(
                "modcod table: thresholds and efficiencies must be strictly increasing");
    }
}

ModcodTable default_modcod_table() {
    ModcodTable table;
    for (int i = 0; i <= 60; ++i) {
        const double snir_db = -10.0 + 0.5 * i;
        const double eff =
            std::min(5.9, 0.8 * std::log2(1.0 + std::pow(10.0, snir_db / 10.0)));
        table.rows.push_back({snir_db, eff});
    }
    table.validate();
    return table;
}

double modcod_lookup(const ModcodTable& table, double snir_db) {
    double eff = 0.0;
    for (const ModcodTable::Row& row : table.rows) {
        if (snir_db >= row.snir_threshold_db)
            eff = row.efficiency;
        else
            break;
    }
    return eff;
}

ModcodTable load_modcod_csv(std::istream& is) {
    ModcodTable table;
    std::string line;
    if (!std::getline(is, line) || line.rfind("snir_db,eff_bits_per_symbol", 0) != 0)
        throw std::runtime_error("modcod csv: missing 'snir_db,eff_bits_per_symbol' header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double snir = 0.0, eff = 0.0;
        char comma = 0;
        if (!(ls >> snir >> comma >> eff) || comma != ',')
            throw std::runtime_error("modcod csv: bad row '" + line + "'");
        table.rows.push_back({snir, eff});
    }
    table.validate();
    return table;
}

ModcodTable load_modcod_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("modcod csv: cannot open " + path);
    return load_modcod_csv(is);
}

void write_modcod_csv(const ModcodTable& table, std::ostream& os) {
    os << "snir_db,eff_bits_per_symbol\n";
    char buf[64];
    for (const ModcodTable::Row& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", row.snir_threshold_db, row.efficiency);
        os << buf;
    }
}

}  // namespace htsim
