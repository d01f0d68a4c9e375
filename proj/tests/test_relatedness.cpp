#include "doctest.h"
#include "ecx/errors.hpp"
#include "ecx/relatedness.hpp"
#include "ecx/synth.hpp"
#include "oracles.hpp"

using namespace ecx;

namespace {

SpecializationMatrix m_2x2() {
    // M = [[1,1],[1,0]]: u = (2,1), C_12 = 1
    Eigen::MatrixXd e(2, 2);
    e << 1, 1, 1, 0;
    return SpecializationMatrix::from_entries({"R1", "R2"}, {"A1", "A2"}, 2010, e);
}

}  // namespace

TEST_CASE("proximity matches the hand count and the conditional-probability oracle") {
    const auto phi = proximity(m_2x2());
    CHECK(phi.phi(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(phi.phi(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(phi.phi(0, 0) == 1.0);
    CHECK(phi.phi(1, 1) == 1.0);

    // Brute-force conditional-probability enumeration.
    const oracle::Matrix mo{{1, 1}, {1, 0}};
    CHECK(phi.phi(0, 1) == doctest::Approx(oracle::proximity(mo, 0, 1)).epsilon(1e-12));
}

TEST_CASE("proximity bounds, symmetry, and guards on random fixtures") {
    for (std::uint64_t seed : {2u, 3u, 4u}) {
        const auto m = synth::gen_specialization(15, 12, synth::Random{0.35}, seed);
        const auto phi = proximity(m);
        const oracle::Matrix mo = [&] {
            oracle::Matrix o(m.entries.rows(), std::vector<double>(m.entries.cols()));
            for (Eigen::Index r = 0; r < m.entries.rows(); ++r)
                for (Eigen::Index a = 0; a < m.entries.cols(); ++a) o[r][a] = m.entries(r, a);
            return o;
        }();
        for (Eigen::Index i = 0; i < phi.phi.rows(); ++i)
            for (Eigen::Index j = 0; j < phi.phi.cols(); ++j) {
                CHECK(phi.phi(i, j) == phi.phi(j, i));
                CHECK(phi.phi(i, j) >= 0.0);
                CHECK(phi.phi(i, j) <= 1.0);
                if (i != j)
                    CHECK(phi.phi(i, j) ==
                          doctest::Approx(oracle::proximity(mo, i, j)).epsilon(1e-12));
            }
    }
}

TEST_CASE("zero-ubiquity activities get a zero proximity row") {
    Eigen::MatrixXd e(3, 3);
    e << 1, 1, 0, 1, 0, 0, 1, 1, 0;
    const auto m = SpecializationMatrix::from_entries({"R1", "R2", "R3"}, {"A1", "A2", "A3"},
                                                      2010, e);
    const auto phi = proximity(m);
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(phi.phi(2, j) == 0.0);
    CHECK(phi.phi(2, 2) == 0.0);  // diagonal only 1 for ubiquity >= 1
}

TEST_CASE("identical columns have proximity 1") {
    Eigen::MatrixXd e(3, 2);
    e << 1, 1, 0, 0, 1, 1;
    const auto m = SpecializationMatrix::from_entries({"R1", "R2", "R3"}, {"A1", "A2"}, 2010, e);
    CHECK(proximity(m).phi(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density matches the hand-evaluated 2x2 case") {
    const auto m = m_2x2();
    const auto phi = proximity(m);
    const auto w = density(m, phi);
    // Region 2, activity 2: phi_21*1 / (phi_21 + phi_22) = 0.5/1.5 = 1/3
    CHECK(w.omega(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // Brute-force check of the same cell.
    const double expected = (1.0 * 0.5 + 0.0 * 1.0) / (0.5 + 1.0);
    CHECK(w.omega(1, 1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("density edge rows: all-ones row gives 1, all-zeros row gives 0") {
    Eigen::MatrixXd e(3, 3);
    e << 1, 1, 1, 0, 0, 0, 1, 0, 1;
    const auto m = SpecializationMatrix::from_entries({"R1", "R2", "R3"}, {"A1", "A2", "A3"},
                                                      2010, e, {0, 1, 0});
    const auto w = density(m, proximity(m));
    for (Eigen::Index a = 0; a < 3; ++a) {
        CHECK(w.omega(0, a) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.omega(1, a) == doctest::Approx(0.0));
    }
}

TEST_CASE("density stays in [0,1] and is monotone in added specializations") {
    for (std::uint64_t seed : {8u, 9u}) {
        const auto m = synth::gen_specialization(12, 10, synth::Random{0.3}, seed);
        const auto phi = proximity(m);
        const auto w = density(m, phi);
        for (Eigen::Index r = 0; r < w.omega.rows(); ++r)
            for (Eigen::Index a = 0; a < w.omega.cols(); ++a) {
                if (!w.activity_defined[a]) continue;
                CHECK(w.omega(r, a) >= 0.0);
                CHECK(w.omega(r, a) <= 1.0);
            }

        // Adding one specialization to a region never decreases its densities
        // (proximity is held fixed).
        Eigen::MatrixXd e2 = m.entries;
        Eigen::Index rr = -1, aa = -1;
        for (Eigen::Index r = 0; r < e2.rows() && rr < 0; ++r)
            for (Eigen::Index a = 0; a < e2.cols(); ++a)
                if (e2(r, a) == 0.0) {
                    rr = r;
                    aa = a;
                    break;
                }
        REQUIRE(rr >= 0);
        e2(rr, aa) = 1.0;
        const auto m2 =
            SpecializationMatrix::from_entries(m.regions, m.activities, m.year, e2);
        const auto w2 = density(m2, phi);
        for (Eigen::Index a = 0; a < w.omega.cols(); ++a) {
            if (!w.activity_defined[a]) continue;
            CHECK(w2.omega(rr, a) >= w.omega(rr, a) - 1e-15);
        }
    }
}

TEST_CASE("closeness follows the exclusion rule and flags degenerate regions") {
    SUBCASE("perfect linear relation over candidates gives rho = 1") {
        // 10 activities; region specialized in the first 2; densities of the
        // remaining 8 made affine-increasing in complexity by construction.
        const int na = 10;
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2, na);
        e(0, 0) = e(0, 1) = 1.0;
        for (int a = 0; a < na; ++a) e(1, a) = 1.0;  // second region keeps ubiquity positive
        std::vector<std::string> acts;
        for (int a = 0; a < na; ++a) acts.push_back("A" + std::to_string(a));
        const auto m = SpecializationMatrix::from_entries({"R1", "R2"}, acts, 2010, e);

        DensityMatrix w;
        w.regions = m.regions;
        w.activities = m.activities;
        w.year = m.year;
        w.activity_defined.assign(na, 1);
        w.omega = Eigen::MatrixXd::Zero(2, na);
        std::map<std::string, double> complexity;
        for (int a = 0; a < na; ++a) {
            complexity[acts[a]] = a;
            w.omega(0, a) = 0.02 * a + 0.1;  // affine in complexity
        }
        const auto res = closeness_to_complexity(m, w, complexity);
        CHECK(res.value.at("R1") == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("fully specialized region is undefined") {
        Eigen::MatrixXd e = Eigen::MatrixXd::Ones(3, 4);
        e(1, 3) = 0.0;
        e(2, 2) = e(2, 3) = 0.0;
        const auto m = SpecializationMatrix::from_entries({"R1", "R2", "R3"},
                                                          {"A1", "A2", "A3", "A4"}, 2010, e);
        const auto w = density(m, proximity(m));
        const auto res = closeness_to_complexity(
            m, w, {{"A1", 1.0}, {"A2", 2.0}, {"A3", 3.0}, {"A4", 4.0}});
        CHECK(res.value.count("R1") == 0);
        bool found = false;
        for (const auto& [region, reason] : res.undefined)
            if (region == "R1") {
                found = true;
                CHECK(reason == "fewer than 3 candidate activities");
            }
        CHECK(found);
    }

    SUBCASE("constant candidate densities are undefined with zero variance") {
        const int na = 5;
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2, na);
        for (int a = 0; a < na; ++a) e(1, a) = 1.0;
        std::vector<std::string> acts;
        for (int a = 0; a < na; ++a) acts.push_back("A" + std::to_string(a));
        const auto m = SpecializationMatrix::from_entries({"R1", "R2"}, acts, 2010, e);
        DensityMatrix w;
        w.regions = m.regions;
        w.activities = m.activities;
        w.year = m.year;
        w.activity_defined.assign(na, 1);
        w.omega = Eigen::MatrixXd::Constant(2, na, 0.4);
        std::map<std::string, double> complexity;
        for (int a = 0; a < na; ++a) complexity[acts[a]] = a;
        const auto res = closeness_to_complexity(m, w, complexity);
        CHECK(res.value.count("R1") == 0);
        bool found = false;
        for (const auto& [region, reason] : res.undefined)
            if (region == "R1" && reason == "zero variance") found = true;
        CHECK(found);
    }

    SUBCASE("closeness lies in [-1, 1] on random fixtures") {
        const auto m = synth::gen_specialization(15, 12, synth::Random{0.35}, 12);
        const auto w = density(m, proximity(m));
        std::map<std::string, double> complexity;
        for (std::size_t a = 0; a < m.activities.size(); ++a)
            complexity[m.activities[a]] = static_cast<double>((a * 13) % 7) - 3.0;
        const auto res = closeness_to_complexity(m, w, complexity);
        for (const auto& [region, rho] : res.value) {
            CHECK(rho >= -1.0);
            CHECK(rho <= 1.0);
        }
    }
}
