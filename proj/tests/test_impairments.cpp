#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "htsim/impairments.hpp"
#include "test_util.hpp"

using namespace htsim;
using cd = std::complex<double>;

namespace {
Eigen::RowVectorXcd sample_row() {
    Eigen::RowVectorXcd row(4);
    row << cd(1.0, 0.2), cd(0.05, -0.02), cd(0.001, 0.001), cd(0.0, 0.0);
    return row;
}
}

TEST_CASE("ideal profile is the exact identity") {
    const ImpairmentStats ideal = ImpairmentStats::ideal();
    ideal.validate();
    Eigen::MatrixXcd truth(2, 4);
    truth.row(0) = sample_row();
    truth.row(1) = 0.5 * sample_row();
    Eigen::MatrixXcd csi = impair_csi(truth, {0, 0}, ideal, 1, 0);
    CHECK(same_bits(csi, truth));  // bit-identical
}

TEST_CASE("estimation threshold zeroes weak coefficients, boundary inclusive") {
    Eigen::RowVectorXcd row(3);
    row << cd(1.0, 0.0), cd(std::pow(10.0, -30.0 / 20.0), 0.0),
        cd(std::pow(10.0, -21.0 / 20.0), 0.0);

    SUBCASE("-inf keeps everything") {
        Eigen::RowVectorXcd out =
            apply_estimation_threshold(row, 0, -std::numeric_limits<double>::infinity());
        CHECK(same_bits(out, row));
    }
    SUBCASE("-21 dB zeroes the -30 dB entry and keeps the boundary one") {
        Eigen::RowVectorXcd out = apply_estimation_threshold(row, 0, -21.0);
        CHECK(out(0) == row(0));
        CHECK(out(1) == cd(0.0, 0.0));
        CHECK(out(2) == row(2));  // exactly at the threshold: kept
    }
    SUBCASE("threshold is relative to the serving coefficient") {
        Eigen::RowVectorXcd scaled = 0.01 * row;
        Eigen::RowVectorXcd out = apply_estimation_threshold(scaled, 0, -21.0);
        CHECK(out(1) == cd(0.0, 0.0));
        CHECK(out(2) == scaled(2));
    }
    Eigen::RowVectorXcd no_serving(2);
    no_serving << cd(0.0), cd(1.0);
    CHECK_THROWS_AS(apply_estimation_threshold(no_serving, 0, -21.0), std::invalid_argument);
}

TEST_CASE("lowering the threshold never zeroes more coefficients") {
    Eigen::RowVectorXcd row(6);
    row << cd(1.0), cd(0.3), cd(0.1), cd(0.03), cd(0.01), cd(0.003);
    int prev_nonzero = 0;
    for (double t : {-5.0, -10.0, -21.0, -40.0, -80.0}) {
        Eigen::RowVectorXcd out = apply_estimation_threshold(row, 0, t);
        int nonzero = 0;
        for (int i = 0; i < 6; ++i) nonzero += out(i) != cd(0.0, 0.0);
        CHECK(nonzero >= prev_nonzero);
        prev_nonzero = nonzero;
    }
}

TEST_CASE("estimation errors: ideal stats leave the row untouched; zeros stay zero") {
    Eigen::RowVectorXcd row = sample_row();
    Eigen::RowVectorXcd copy = row;
    Rng rng(3);
    apply_estimation_errors(row, 0, ImpairmentStats::ideal(), rng);
    CHECK(same_bits(row, copy));

    Rng rng2(4);
    apply_estimation_errors(row, 0, ImpairmentStats::real(), rng2);
    CHECK(row(3) == cd(0.0, 0.0));  // below-threshold zeros stay exactly zero
    CHECK(row(0) != copy(0));
}

TEST_CASE("error draws reproduce the profile statistics at 1e5 samples") {
    const ImpairmentStats stats = ImpairmentStats::real();
    const int n = 100000;
    Eigen::RowVectorXcd base(2);
    base << cd(1.0, 0.0), cd(0.5, 0.0);

    double sum_ma = 0, sq_ma = 0, sum_mp = 0, sq_mp = 0;
    double sum_ia = 0, sq_ia = 0, sum_ip = 0, sq_ip = 0;
    Rng rng(1234);
    for (int i = 0; i < n; ++i) {
        Eigen::RowVectorXcd row = base;
        apply_estimation_errors(row, 0, stats, rng);
        const double eps_ma = std::abs(row(0)) - 1.0;           // (1+eps)|h|, |h|=1
        const double eps_mp = std::arg(row(0));
        const double eps_ia = std::abs(row(1)) / 0.5 - 1.0;
        const double eps_ip = std::arg(row(1));
        sum_ma += eps_ma; sq_ma += eps_ma * eps_ma;
        sum_mp += eps_mp; sq_mp += eps_mp * eps_mp;
        sum_ia += eps_ia; sq_ia += eps_ia * eps_ia;
        sum_ip += eps_ip; sq_ip += eps_ip * eps_ip;
    }
    auto check_pair = [n](double sum, double sq, const GaussStats& expected) {
        const double mean = sum / n;
        const double sd = std::sqrt(sq / n - mean * mean);
        const double se_mean = expected.stddev / std::sqrt(double(n));
        const double se_sd = expected.stddev / std::sqrt(2.0 * n);
        CHECK(std::abs(mean - expected.mean) < 3.0 * se_mean);
        CHECK(std::abs(sd - expected.stddev) < 3.0 * se_sd);
    };
    check_pair(sum_ma, sq_ma, stats.main_amp);
    check_pair(sum_mp, sq_mp, stats.main_phase);
    check_pair(sum_ia, sq_ia, stats.intf_amp);
    check_pair(sum_ip, sq_ip, stats.intf_phase);
}

TEST_CASE("outdated phase: zero std is identity, drift is common per beam column") {
    Eigen::MatrixXcd csi(3, 2);
    csi << cd(1.0, 0.1), cd(0.2, 0.0), cd(0.5, -0.5), cd(0.1, 0.1), cd(0.3, 0.3), cd(0.0, 0.2);
    Eigen::MatrixXcd copy = csi;
    Rng rng(9);
    apply_outdated_phase(csi, 0.0, rng);
    CHECK(same_bits(csi, copy));

    apply_outdated_phase(csi, 4.14, rng);
    // all users of a beam see the same rotation: ratios within a column match
    for (int b = 0; b < 2; ++b) {
        const cd r0 = csi(0, b) / copy(0, b);
        CHECK(std::abs(std::abs(r0) - 1.0) < 1e-12);  // pure rotation
        for (int k = 1; k < 3; ++k) {
            if (copy(k, b) == cd(0.0, 0.0)) continue;
            CHECK(std::abs(csi(k, b) / copy(k, b) - r0) < 1e-12);
        }
    }
}

TEST_CASE("outdated phase draws have the configured spread") {
    const double std_deg = 4.14;
    const int n = 100000;
    double sum = 0, sq = 0;
    Rng rng(77);
    Eigen::MatrixXcd col(1, 1);
    for (int i = 0; i < n; ++i) {
        col(0, 0) = cd(1.0, 0.0);
        apply_outdated_phase(col, std_deg, rng);
        const double deg = std::arg(col(0, 0)) * 180.0 / M_PI;
        sum += deg;
        sq += deg * deg;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) < 3.0 * std_deg / std::sqrt(double(n)));
    CHECK(std::abs(sd - std_deg) < 3.0 * std_deg / std::sqrt(2.0 * n));
}

TEST_CASE("full csi impairment is deterministic per seed and refresh") {
    Eigen::MatrixXcd truth(3, 4);
    truth.row(0) = sample_row();
    truth.row(1) = cd(0.8, 0.1) * sample_row();
    truth.row(2) = cd(0.2, -0.6) * sample_row();
    const std::vector<int> serving{0, 0, 1};
    const ImpairmentStats stats = ImpairmentStats::real();

    Eigen::MatrixXcd a = impair_csi(truth, serving, stats, 5, 0);
    Eigen::MatrixXcd b = impair_csi(truth, serving, stats, 5, 0);
    Eigen::MatrixXcd c = impair_csi(truth, serving, stats, 5, 1);
    Eigen::MatrixXcd d = impair_csi(truth, serving, stats, 6, 0);
    CHECK(same_bits(a, b));
    CHECK(!same_bits(a, c));  // new refresh, new draws
    CHECK(!same_bits(a, d));  // new seed, new draws
}

TEST_CASE("error draws are independent across refreshes") {
    // near-zero sample cross-correlation between the same coefficient's
    // amplitude errors in consecutive refreshes
    Eigen::MatrixXcd truth(1, 1);
    truth(0, 0) = cd(1.0, 0.0);
    const ImpairmentStats stats = ImpairmentStats::real();
    const int n = 100000;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double x =
            std::abs(impair_csi(truth, {0}, stats, 99, 2 * i)(0, 0)) - 1.0;
        const double y =
            std::abs(impair_csi(truth, {0}, stats, 99, 2 * i + 1)(0, 0)) - 1.0;
        sx += x; sy += y; sxy += x * y; sxx += x * x; syy += y * y;
    }
    const double corr = (sxy - sx * sy / n) /
                        std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("stats validation rejects negative spreads") {
    ImpairmentStats bad;
    bad.main_amp.stddev = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
