#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "latentgp/load.hpp"
#include "latentgp/material.hpp"
#include "latentgp/mesh.hpp"
#include "latentgp/solver.hpp"

namespace latentgp {

// Paired load inputs and converged displacement fields, one sample per
// row. For point loads a force row is (fx, fy, d) with d already
// snapped to a loadable node; for body forces it is (bx, by).
struct Dataset {
    LoadKind kind = LoadKind::PointLoad;
    Eigen::MatrixXd forces;
    Eigen::MatrixXd displacements;
    int generation_failures = 0;

    int n() const { return static_cast<int>(forces.rows()); }
    int input_dim() const { return static_cast<int>(forces.cols()); }
    int field_dim() const { return static_cast<int>(displacements.cols()); }
};

// Draws load samples with components uniform in [-force_range, force_range]
// (point loads additionally pick a uniformly random loadable node) and
// solves each to equilibrium. A sample whose solve fails is redrawn from
// a fresh stream keyed by (seed, sample index, attempt), so results do
// not depend on thread count. Raises TooManyFailuresError when failures
// exceed the sample count (resample rate above 50%) or a single sample
// exhausts its attempt budget.
//
// `sample_index_offset` shifts the stream keys; generating n_train
// samples at offset 0 and n_test at offset n_train yields one combined
// deterministic sequence split into disjoint sets.
Dataset generate_dataset(const Mesh2D& mesh, const MaterialParams& mat, LoadKind kind,
                         double force_range, int n_samples, std::uint64_t seed,
                         const SolveSettings& solve = {}, int threads = 1,
                         int sample_index_offset = 0);

}  // namespace latentgp
