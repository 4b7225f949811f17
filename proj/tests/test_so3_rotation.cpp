#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include "specvs/egi.hpp"
#include "specvs/error.hpp"
#include "specvs/so3_transform.hpp"

using namespace specvs;

TEST_CASE("complex_ylm: l = 0 and the l = 1 pole") {
    const VecXc y0 = complex_ylm(0, {0.7, 1.3});
    CHECK(y0(0).real() == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)));
    CHECK(y0(0).imag() == doctest::Approx(0.0));

    const VecXc y1 = complex_ylm(1, {0.0, 0.0});
    CHECK(std::abs(y1(0)) == doctest::Approx(0.0));                          // m = -1
    CHECK(y1(1).real() == doctest::Approx(std::sqrt(3.0 / (4.0 * kPi))));    // m = 0
    CHECK(std::abs(y1(2)) == doctest::Approx(0.0));                          // m = +1
}

TEST_CASE("complex_ylm: matches the independent Legendre-recursion oracle") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const SphericalDirection dir{rng.uniform(0.0, kPi), rng.uniform(0.0, 2.0 * kPi)};
        for (int l : {1, 2, 3, 7}) {
            const VecXc y = complex_ylm(l, dir);
            for (int m = -l; m <= l; ++m)
                CHECK(std::abs(y(m + l) - oracles::ylm_oracle(l, m, dir.theta, dir.phi)) < 1e-12);
        }
    }
}

TEST_CASE("T matrices are unitary") {
    for (int l = 0; l <= 12; ++l) {
        const MatXc t = real_harmonic_t_matrix(l);
        const MatXc should_be_identity = t * t.adjoint();
        CHECK((should_be_identity - MatXc::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("real_basis_s: l = 0 constant and l = 1 gives sqrt(3/4pi) (y, z, x)") {
    const MatXc t0 = real_harmonic_t_matrix(0);
    const VecX s0 = real_basis_s(0, {1.0, 2.0}, t0);
    CHECK(s0(0) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)));

    const MatXc t1 = real_harmonic_t_matrix(1);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const Vec3 n = rng.unit_vector();
        const SphericalDirection dir = cart_to_sph(n);
        const VecX s = real_basis_s(1, dir, t1);
        const double c = std::sqrt(3.0 / (4.0 * kPi));
        CHECK(s(0) == doctest::Approx(c * n.y()).epsilon(1e-10));
        CHECK(s(1) == doctest::Approx(c * n.z()).epsilon(1e-10));
        CHECK(s(2) == doctest::Approx(c * n.x()).epsilon(1e-10));
    }
}

TEST_CASE("real_basis_s: quadrature orthonormality for l, l' <= 7") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    for (int l = 0; l < B; ++l)
        for (int lp = l; lp < B; ++lp) {
            const MatX gram = tables->basis_at_nodes(l) *
                              tables->node_weights().asDiagonal() *
                              tables->basis_at_nodes(lp).transpose();
            if (l == lp) {
                CHECK((gram - MatX::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() < 1e-8);
            } else {
                CHECK(gram.cwiseAbs().maxCoeff() < 1e-8);
            }
        }
}

TEST_CASE("wigner_d: identity at beta = 0 and the closed-form d1 at pi/2") {
    for (int l : {0, 1, 2, 5, 9}) {
        const MatX d = wigner_d(l, 0.0);
        CHECK((d - MatX::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() == 0.0);
    }

    // d^1(pi/2) in ascending-m storage, from the closed form with
    // c = 0, s = 1: entries in {+-1/2, +-1/sqrt2, 0}.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    MatX expected(3, 3);
    expected << 0.5, inv_sqrt2, 0.5,
               -inv_sqrt2, 0.0, inv_sqrt2,
                0.5, -inv_sqrt2, 0.5;
    CHECK((wigner_d(1, kPi / 2.0) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("wigner_d: matches the lgamma-sum oracle across degrees and angles") {
    Rng rng(61);
    for (int l : {1, 2, 3, 5, 8, 16, 32}) {
        for (int trial = 0; trial < 4; ++trial) {
            const double beta = rng.uniform(1e-3, kPi - 1e-3);
            const MatX d = wigner_d(l, beta);
            for (int mp = -l; mp <= l; ++mp)
                for (int m = -l; m <= l; ++m)
                    CHECK(std::abs(d(mp + l, m + l) - oracles::wigner_d_oracle(l, mp, m, beta)) <
                          1e-10);
        }
    }
}

TEST_CASE("wigner_d: orthogonality d d^T = I for l <= 8, 20 random betas") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const double beta = rng.uniform(0.0, kPi);
        for (int l = 0; l <= 8; ++l) {
            const MatX d = wigner_d(l, beta);
            CHECK((d * d.transpose() - MatX::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() <
                  1e-12);
        }
    }
    // High degree stays orthogonal too (1e-9 per the operator invariant).
    for (double beta : {0.05, 1.0, 2.5, kPi - 0.05}) {
        const MatX d = wigner_d(48, beta);
        CHECK((d * d.transpose() - MatX::Identity(97, 97)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("sph_forward: constant samples excite only the l = 0 block") {
    const int B = 16;
    const auto tables = HarmonicTables::get(B, B);
    Egi egi;
    egi.bandwidth = B;
    egi.counts.assign(static_cast<size_t>(2 * B) * 2 * B, 3);
    const SphCoeffs coeffs = sph_forward(egi, *tables);
    // f = 3 everywhere: F^0 = 3 * sqrt(4 pi), all other blocks zero.
    CHECK(coeffs.blocks[0](0) == doctest::Approx(3.0 * std::sqrt(4.0 * kPi)).epsilon(1e-10));
    for (int l = 1; l < B; ++l) CHECK(coeffs.blocks[l].cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sph_forward: recovers a single degree-2 basis function with tiny cross-talk") {
    const int B = 16;
    const auto tables = HarmonicTables::get(B, B);
    // Samples of f = S^2_1 (one fixed degree-2 real basis function).
    const VecX samples = tables->basis_at_nodes(2).row(1).transpose();
    const SphCoeffs coeffs = sph_forward(samples, *tables);
    CHECK(coeffs.blocks[2](1) == doctest::Approx(1.0).epsilon(1e-10));
    double cross_talk = 0.0;
    for (int l = 0; l < B; ++l)
        for (int i = 0; i < coeffs.blocks[l].size(); ++i)
            if (!(l == 2 && i == 1)) cross_talk = std::max(cross_talk, std::abs(coeffs.blocks[l](i)));
    CHECK(cross_talk < 1e-6);
}

TEST_CASE("sph_forward/synthesis: exact round trip for random band-limited samples") {
    const int B = 16;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(81);
    const SphCoeffs truth = oracles::random_coeffs(B, B, rng);
    const VecX samples = sph_synthesis(truth, *tables);
    const SphCoeffs back = sph_forward(samples, *tables);
    for (int l = 0; l < B; ++l)
        CHECK((back.blocks[l] - truth.blocks[l]).cwiseAbs().maxCoeff() <
              1e-8 * std::max(1.0, truth.blocks[l].cwiseAbs().maxCoeff()));
    const VecX resynth = sph_synthesis(back, *tables);
    CHECK((resynth - samples).cwiseAbs().maxCoeff() < 1e-8 * samples.cwiseAbs().maxCoeff());
}

TEST_CASE("Parseval: quadrature norm equals coefficient energy for band-limited functions") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(91);
    const SphCoeffs coeffs = oracles::random_coeffs(B, B, rng);
    const VecX samples = sph_synthesis(coeffs, *tables);
    const double quad_norm = samples.cwiseProduct(tables->node_weights()).dot(samples);
    CHECK(quad_norm == doctest::Approx(coeffs.energy()).epsilon(1e-8));
}

TEST_CASE("u_operator: identity rotation gives the identity matrix") {
    for (int l = 0; l <= 8; ++l) {
        const MatXc t = real_harmonic_t_matrix(l);
        const MatX u = u_operator(l, 0.0, 0.0, 0.0, t);
        CHECK((u - MatX::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("u_operator: orthogonal, homomorphism within 1e-9 for l <= 8") {
    Rng rng(111);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat3 r1 = oracles::random_rotation(rng);
        const Mat3 r2 = oracles::random_rotation(rng);
        for (int l = 0; l <= 8; ++l) {
            const MatXc t = real_harmonic_t_matrix(l);
            const MatX u1 = u_operator(l, r1, t);
            const MatX u2 = u_operator(l, r2, t);
            const MatX u12 = u_operator(l, Mat3(r1 * r2), t);
            CHECK((u1 * u1.transpose() - MatX::Identity(2 * l + 1, 2 * l + 1))
                      .cwiseAbs()
                      .maxCoeff() < 1e-9);
            CHECK((u12 - u1 * u2).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("u_operator: transformation law S^l(R^T dir) = U^l(R)^T S^l(dir)") {
    Rng rng(121);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat3 r = oracles::random_rotation(rng);
        const Vec3 n = rng.unit_vector();
        for (int l = 0; l <= 6; ++l) {
            const MatXc t = real_harmonic_t_matrix(l);
            const MatX u = u_operator(l, r, t);
            const VecX lhs = real_basis_s(l, cart_to_sph(Vec3(r.transpose() * n)), t);
            const VecX rhs = u.transpose() * real_basis_s(l, cart_to_sph(n), t);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("u_generator: zero for l = 0, skew-symmetric, matches finite differences") {
    const MatXc t0 = real_harmonic_t_matrix(0);
    CHECK(u_generator(0, RotationAxis::kX, t0).cwiseAbs().maxCoeff() == 0.0);

    for (int l = 1; l <= 8; ++l) {
        const MatXc t = real_harmonic_t_matrix(l);
        for (auto axis : {RotationAxis::kX, RotationAxis::kY, RotationAxis::kZ}) {
            const MatX u = u_generator(l, axis, t);
            CHECK((u + u.transpose()).cwiseAbs().maxCoeff() < 1e-12);

            Vec3 unit = Vec3::Zero();
            unit(static_cast<int>(axis)) = 1.0;
            const double eps = 1e-6;
            const MatX plus = u_operator(l, rotation_exp(eps * unit), t);
            const MatX minus = u_operator(l, rotation_exp(-eps * unit), t);
            const MatX fd = (plus - minus) / (2.0 * eps);
            CHECK((u - fd).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("so3_correlation: self-correlation at identity is the energy over 4 pi") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(131);
    const SphCoeffs f = oracles::random_coeffs(B, B, rng);
    const double self = so3_correlation(f, f, Mat3::Identity(), *tables);
    CHECK(self == doctest::Approx(f.energy() / (4.0 * kPi)).epsilon(1e-12));

    // It is also the maximum over rotations.
    for (int i = 0; i < 25; ++i) {
        const Mat3 r = oracles::random_rotation(rng);
        CHECK(so3_correlation(f, f, r, *tables) <= self + 1e-9);
    }
}

TEST_CASE("so3_correlation: l = 0-only stacks are rotation invariant with zero gradient") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    SphCoeffs f;
    f.bandwidth = B;
    f.blocks.assign(B, VecX());
    for (int l = 0; l < B; ++l) f.blocks[l] = VecX::Zero(2 * l + 1);
    f.blocks[0](0) = 2.5;
    Rng rng(141);
    const double at_identity = so3_correlation(f, f, Mat3::Identity(), *tables);
    for (int i = 0; i < 10; ++i) {
        const Mat3 r = oracles::random_rotation(rng);
        CHECK(so3_correlation(f, f, r, *tables) == doctest::Approx(at_identity).epsilon(1e-12));
        CHECK(correlation_gradient(f, f, r, *tables).norm() < 1e-14);
    }
}

TEST_CASE("so3_correlation: maximized at the generating rotation over a dense grid") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(151);
    const SphCoeffs f = oracles::random_coeffs(B, B, rng);
    const Mat3 r0 = oracles::random_rotation(rng);
    const SphCoeffs g = oracles::rotate_coeffs(f, r0, *tables);

    const double at_r0 = so3_correlation(f, g, r0, *tables);
    const auto grid = oracles::so3_grid_search(f, g, *tables, 10.0);
    CHECK(at_r0 >= grid.value - 1e-9);
    CHECK(geodesic_angle(grid.rotation, r0) < 10.0 * kPi / 180.0);
}

TEST_CASE("correlation_gradient: stationary at the generating rotation, matches FD elsewhere") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(161);
    const SphCoeffs f = oracles::random_coeffs(B, B, rng);
    const Mat3 r0 = oracles::random_rotation(rng);
    const SphCoeffs g = oracles::rotate_coeffs(f, r0, *tables);

    CHECK(correlation_gradient(f, g, r0, *tables).norm() < 1e-8 * f.energy());

    for (int trial = 0; trial < 10; ++trial) {
        const Mat3 r = oracles::random_rotation(rng);
        const Vec3 analytic = correlation_gradient(f, g, r, *tables);
        const Vec3 fd = oracles::fd_correlation_gradient(f, g, r, *tables);
        CHECK((analytic - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    }
}

TEST_CASE("correlation_gradient: bandwidth mismatch throws") {
    const auto t8 = HarmonicTables::get(8, 8);
    Rng rng(3);
    const SphCoeffs a = oracles::random_coeffs(8, 8, rng);
    const SphCoeffs b = oracles::random_coeffs(8, 4, rng);
    CHECK_THROWS_AS(correlation_gradient(a, b, Mat3::Identity(), *t8), InvalidArgument);
}

TEST_CASE("rotation_cost: zero at identity for equal EGIs and at exact lattice rotations") {
    const int B = 16;
    const PointCloud mug = helpers::make_mug(171);
    const Egi f = build_egi(mug, B);
    CHECK(rotation_cost(f, f, Mat3::Identity()) == doctest::Approx(0.0));

    // Columns shifted by B/2 equal a 90-degree z rotation exactly.
    RigidTransform rot;
    rot.rotation = rot_z(kPi / 2.0);
    const Egi g = build_egi(apply_transform(mug, rot, TransformPivot::kCentroid), B);
    CHECK(rotation_cost(f, g, rot.rotation) == doctest::Approx(0.0));
}

TEST_CASE("rotation_cost: oracle-optimal rotation beats 20 random rotations") {
    const int B = 16;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(181);
    const PointCloud mug = helpers::make_mug(191);
    RigidTransform h;
    h.rotation = oracles::random_rotation(rng);
    const PointCloud turned = apply_transform(mug, h, TransformPivot::kCentroid);

    const Egi f = build_egi(mug, B);
    const Egi g = build_egi(turned, B);
    const double at_truth = rotation_cost(f, g, h.rotation);
    int not_worse = 0;
    for (int i = 0; i < 20; ++i) {
        const Mat3 r = oracles::random_rotation(rng);
        if (at_truth <= rotation_cost(f, g, r) + 1e-12) ++not_worse;
    }
    CHECK(not_worse == 20);
}

TEST_CASE("so3_ascend: monotone with a small fixed step; recovers rotations from coefficients") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(201);

    int monotone_runs = 0;
    const int runs = 20;
    for (int trial = 0; trial < runs; ++trial) {
        const SphCoeffs f = oracles::random_coeffs(B, B, rng).normalized();
        const Mat3 r0 = oracles::random_rotation(rng);
        const SphCoeffs g = oracles::rotate_coeffs(f, r0, *tables);

        AscendOptions opts;
        opts.adaptive = false;
        opts.step = 0.1;  // = 0.1 / (||F|| ||G||) for unit-energy stacks
        opts.max_iters = 150;
        Mat3 r = Mat3::Identity();
        double prev = so3_correlation(f, g, r, *tables);
        bool monotone = true;
        for (int it = 0; it < 100; ++it) {
            const Vec3 grad = correlation_gradient(f, g, r, *tables);
            r = orthonormalized(r * rotation_exp(opts.step * grad));
            const double value = so3_correlation(f, g, r, *tables);
            if (value < prev - 1e-12) monotone = false;
            prev = value;
        }
        if (monotone) ++monotone_runs;
    }
    CHECK(monotone_runs >= runs - 1);  // >= 99% contract, sampled

    // Adaptive ascent from identity reaches the generating rotation for
    // moderate offsets.
    for (int trial = 0; trial < 5; ++trial) {
        const SphCoeffs f = oracles::random_coeffs(B, B, rng).normalized();
        const Mat3 r0 = rotation_exp(rng.unit_vector() * rng.uniform(0.1, kPi / 3.0));
        const SphCoeffs g = oracles::rotate_coeffs(f, r0, *tables);
        const AscendResult res = so3_ascend(f, g, *tables, {});
        CHECK(geodesic_angle(res.rotation, r0) < 3.0 * kPi / 180.0);
    }
}

TEST_CASE("zero gradient at finite-difference-refined grid maximizers") {
    const int B = 8;
    const auto tables = HarmonicTables::get(B, B);
    Rng rng(211);
    const SphCoeffs f = oracles::random_coeffs(B, B, rng).normalized();
    const Mat3 r0 = oracles::random_rotation(rng);
    const SphCoeffs g = oracles::rotate_coeffs(f, r0, *tables);

    const auto grid = oracles::so3_grid_search(f, g, *tables, 20.0);
    const Mat3 refined = oracles::fd_refine(f, g, *tables, grid.rotation);
    CHECK(correlation_gradient(f, g, refined, *tables).norm() < 1e-8);
}
