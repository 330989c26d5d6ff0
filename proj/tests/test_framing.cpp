#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "htsim/framing.hpp"
#include "htsim/rng.hpp"

using namespace htsim;

TEST_CASE("bundle composition reproduces the fixed-length bundle family") {
    // 64800-bit codewords in a 64800-symbol bundle
    struct Case {
        int bits;
        int symbols_per_frame;
        int frames;
    };
    for (const Case& c : {Case{2, 32400, 2}, Case{3, 21600, 3}, Case{4, 16200, 4}}) {
        BundleSpec spec = bundle_composition(c.bits, 64800, 64800);
        CHECK(spec.symbols_per_frame == c.symbols_per_frame);
        CHECK(spec.frames_per_bundle == c.frames);
        CHECK(static_cast<long>(spec.frames_per_bundle) * spec.symbols_per_frame ==
              spec.bundle_payload_symbols);
    }
    // 16200-bit short codewords fit too
    BundleSpec s = bundle_composition(2, 16200, 64800);
    CHECK(s.frames_per_bundle == 8);
}

TEST_CASE("bundle composition rejects non-divisible combinations") {
    CHECK_THROWS_AS(bundle_composition(7, 64800, 64800), std::invalid_argument);
    CHECK_THROWS_AS(bundle_composition(2, 64800, 64900), std::invalid_argument);
    CHECK_THROWS_AS(bundle_composition(0, 64800, 64800), std::invalid_argument);
}

TEST_CASE("walsh-hadamard base case and orthogonality") {
    CHECK(walsh_hadamard(1, 0) == std::vector<int>{1});

    // W W^T = n I, brute force at 32
    for (int i = 0; i < 32; ++i) {
        std::vector<int> wi = walsh_hadamard(32, i);
        for (int j = 0; j < 32; ++j) {
            std::vector<int> wj = walsh_hadamard(32, j);
            long dot = 0;
            for (int k = 0; k < 32; ++k) dot += wi[k] * wj[k];
            CHECK(dot == (i == j ? 32 : 0));
        }
    }
    // self-correlation at 256
    std::vector<int> w = walsh_hadamard(256, 137);
    long dot = 0;
    for (int k = 0; k < 256; ++k) dot += w[k] * w[k];
    CHECK(dot == 256);
}

TEST_CASE("walsh-hadamard rejects bad lengths and indices") {
    CHECK_THROWS_AS(walsh_hadamard(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(walsh_hadamard(32, 32), std::invalid_argument);
    CHECK_THROWS_AS(walsh_hadamard(32, -1), std::invalid_argument);
}

TEST_CASE("beam signatures: common unimodular scrambler preserves orthogonality") {
    const std::uint64_t seed = 99;
    BeamSignature a = beam_signature(3, 5, seed);
    BeamSignature b = beam_signature(9, 5, seed);
    BeamSignature a2 = beam_signature(3, 5, seed);
    CHECK(a.sosf == a2.sosf);
    CHECK(a.sf_pilot == a2.sf_pilot);

    long dot = 0;
    for (int k = 0; k < kSosfSequenceLength; ++k) dot += a.sosf[k] * b.sosf[k];
    CHECK(dot == 0);  // zero before scrambling, still zero after

    // all 256 indices give pairwise-orthogonal SOSF signatures (Gram check)
    std::vector<std::vector<int>> sig;
    for (int i = 0; i < 256; ++i) sig.push_back(beam_signature(i, i % 32, seed).sosf);
    bool gram_ok = true;
    for (int i = 0; i < 256 && gram_ok; ++i)
        for (int j = 0; j < 256; ++j) {
            long g = 0;
            for (int k = 0; k < 256; ++k) g += sig[i][k] * sig[j][k];
            if (g != (i == j ? 256 : 0)) {
                gram_ok = false;
                break;
            }
        }
    CHECK(gram_ok);

    // scrambler entries are unimodular
    for (int v : scrambler_sequence(7, 64)) CHECK(std::abs(v) == 1);
    CHECK_THROWS_AS(beam_signature(256, 0, seed), std::invalid_argument);
    CHECK_THROWS_AS(beam_signature(0, 32, seed), std::invalid_argument);
}

TEST_CASE("minimal superframe is SOSF plus one payload block") {
    SuperframeConfig cfg;
    cfg.total_symbols = 270 + 1000;
    cfg.p2_pilot_symbols = 0;
    cfg.pilot_period = 0;
    SuperframeLayout layout = build_superframe_layout(cfg);
    REQUIRE(layout.fields.size() == 2);
    CHECK(layout.fields[0].kind == FieldKind::Sosf);
    CHECK(layout.fields[0].length == 270);
    CHECK(layout.fields[0].precoded == false);
    CHECK(layout.fields[0].scrambler == ScramblerKind::Reference);
    CHECK(layout.fields[1].kind == FieldKind::Payload);
    CHECK(layout.fields[1].length == 1000);
    CHECK(layout.fields[1].precoded == true);
}

TEST_CASE("pilot fields intersperse every pilot_period payload symbols") {
    SuperframeConfig cfg;
    cfg.p2_pilot_symbols = 0;
    cfg.pilot_period = 1000;
    cfg.pilot_symbols = 36;
    // payload = 3 full chunks + remainder -> floor(L/p) = 3 pilots
    cfg.total_symbols = 270 + 3 * (1000 + 36) + 500;
    SuperframeLayout layout = build_superframe_layout(cfg);
    int pilots = 0;
    for (const SuperframeField& f : layout.fields)
        if (f.kind == FieldKind::SfPilot) {
            ++pilots;
            CHECK(f.precoded == false);
            CHECK(f.scrambler == ScramblerKind::Reference);
            CHECK(f.length == 36);
        }
    CHECK(pilots == 3);
}

TEST_CASE("layouts tile the superframe exactly") {
    for (const SuperframeConfig& cfg :
         {SuperframeConfig{}, SuperframeConfig{612540, 0, 1440, 36},
          SuperframeConfig{4890, 90, 770, 36}, SuperframeConfig{5000, 0, 0, 0}}) {
        SuperframeLayout layout = build_superframe_layout(cfg);
        long pos = 0;
        for (const SuperframeField& f : layout.fields) {
            CHECK(f.offset == pos);  // no gaps, no overlap
            CHECK(f.length > 0);
            pos += f.length;
        }
        CHECK(pos == cfg.total_symbols);
        CHECK(layout.fields.front().kind == FieldKind::Sosf);
        CHECK(layout.fields.front().length == kSosfSymbols);
    }
}

TEST_CASE("untileable superframe configs are rejected") {
    SuperframeConfig cfg;
    cfg.total_symbols = 200;  // smaller than the SOSF
    CHECK_THROWS_AS(build_superframe_layout(cfg), std::invalid_argument);
    cfg.total_symbols = 270 + 1000 + 36;  // pilot would have no payload after it
    cfg.p2_pilot_symbols = 0;
    cfg.pilot_period = 1000;
    cfg.pilot_symbols = 36;
    CHECK_THROWS_AS(build_superframe_layout(cfg), std::invalid_argument);
}

TEST_CASE("layout text dump lists every field") {
    std::ostringstream os;
    write_layout_text(build_superframe_layout(SuperframeConfig{}), os);
    CHECK(os.str().find("SOSF 0 270 plain reference") != std::string::npos);
    CHECK(os.str().find("P2-PILOT") != std::string::npos);
}

TEST_CASE("default modcod table follows the gapped-Shannon generator") {
    ModcodTable table = default_modcod_table();
    table.validate();
    CHECK(table.rows.front().snir_threshold_db == -10.0);
    CHECK(table.rows.back().snir_threshold_db == 20.0);
    CHECK(table.rows.size() == 61);
    // at 0 dB: 0.8*log2(2) = 0.8 exactly (threshold row included)
    CHECK(modcod_lookup(table, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("modcod lookup: outage floor, inclusive boundary, monotonicity") {
    ModcodTable table = default_modcod_table();
    CHECK(modcod_lookup(table, -15.0) == 0.0);           // below -10 dB: outage
    CHECK(modcod_lookup(table, -10.0) ==
          doctest::Approx(table.rows.front().efficiency));  // boundary inclusive
    CHECK(modcod_lookup(table, 1000.0) == doctest::Approx(table.rows.back().efficiency));

    Rng rng(5);
    double prev_snir = -30.0, prev_eff = -1.0;
    bool monotone = true;
    for (int i = 0; i < 500; ++i) {
        prev_snir += rng.uniform(0.0, 0.2);
        const double eff = modcod_lookup(table, prev_snir);
        monotone = monotone && eff >= prev_eff;
        prev_eff = eff;
    }
    CHECK(monotone);
}

TEST_CASE("modcod csv round-trips") {
    ModcodTable table = default_modcod_table();
    std::ostringstream os;
    write_modcod_csv(table, os);
    std::istringstream is(os.str());
    ModcodTable back = load_modcod_csv(is);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(back.rows[i].snir_threshold_db ==
              doctest::Approx(table.rows[i].snir_threshold_db).epsilon(1e-9));
        CHECK(back.rows[i].efficiency == doctest::Approx(table.rows[i].efficiency).epsilon(1e-9));
    }

    std::istringstream bad("wrong,header\n1,2\n");
    CHECK_THROWS(load_modcod_csv(bad));
    std::istringstream unsorted("snir_db,eff_bits_per_symbol\n-11,1\n-12,2\n");
    CHECK_THROWS(load_modcod_csv(unsorted));
    std::istringstream shallow("snir_db,eff_bits_per_symbol\n-5,1\n0,2\n");
    CHECK_THROWS(load_modcod_csv(shallow));  // must extend to -10 dB
}
