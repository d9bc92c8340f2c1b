/*
 * random.hpp — seeded sampling of states, unitaries, channels and instruments.
 *
 * All sampling is deterministic given the generator state; callers seed a
 * std::mt19937_64 so that every randomised check in the test suites is
 * reproducible.
 */

#pragma once

#include <random>

#include "qcnet/cpm.hpp"

namespace qcnet {

using Rng = std::mt19937_64;

/** Complex matrix with independent standard Gaussian entries. */
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/** Haar-distributed unitary of dimension `d`. */
Matrix random_unitary(std::size_t d, Rng& rng);

/** Haar-distributed isometry with `cols` ≤ `rows`. */
Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng);

/** Normalised Haar-random pure state. */
Vector random_pure_state(std::size_t d, Rng& rng);

/** Random full-rank density operator. */
Matrix random_density(std::size_t d, Rng& rng);

/**
 * Random CPTP map from `inputs` to `outputs` (Stinespring isometry into an
 * environment of dimension `env`, then trace).
 */
CPM random_cptp(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
                Rng& rng, std::size_t env = 0);

/**
 * Random instrument: `n_outcomes` completely positive branches summing to a
 * CPTP map (a Stinespring isometry with a measured environment factor).
 * Returns the branch CPMs in outcome order.
 */
std::vector<CPM> random_instrument_branches(std::vector<SystemLabel> inputs,
                                            std::vector<SystemLabel> outputs,
                                            std::size_t n_outcomes, Rng& rng);

}  // namespace qcnet
