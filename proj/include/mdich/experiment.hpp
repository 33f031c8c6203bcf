#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdich/oracle.hpp"

namespace mdich {

/// d-k-above-2   greedy net dichotomy, alpha > 2
/// d-k-below-2   k-increasing extraction then bunch/chain split, eps = alpha - 1
/// e-k-above-2   k-increasing tree fed to the coarse HST dichotomy
/// e-k-below-2   well separated k-increasing tree fed to the fine HST dichotomy
/// d-1           as d-k-below-2 with k = 1
enum class Suite { DkAbove2, DkBelow2, EkAbove2, EkBelow2, D1 };

Suite parse_suite(const std::string & name);
const char * to_string(Suite s);

enum class Family { Random, Adversary };
Family parse_family(const std::string & name);
const char * to_string(Family f);

struct ExperimentConfig {
    Suite suite = Suite::DkAbove2;
    std::vector<std::size_t> ns;
    double alpha = 3.0;
    double k = 2.0;
    std::uint64_t seed = 1;      ///< first seed
    std::size_t seeds = 1;       ///< seeds seed, seed+1, ...
    std::optional<Family> family;  ///< default: random, adversary for d-k-below-2
    bool require_oracle = false;
    Caps caps;
    std::size_t threads = 1;
    std::optional<std::string> results_dir;  ///< verbose mode
};

struct ExperimentRow {
    std::size_t n = 0;
    double alpha = 0.0;
    double k = 0.0;
    std::optional<double> eps;
    std::string algorithm;
    std::string branch;
    std::size_t size = 0;
    double distortion = 0.0;
    double guarantee = 0.0;
    std::optional<std::size_t> oracle_opt;
    std::uint64_t seed = 0;
    double ms = 0.0;
    std::optional<std::string> result_hash;
};

/// One row per (n, seed) in that order. Each row's invariants are checked
/// before it is returned (VerificationFailure otherwise). Throws
/// BadParameters for an empty size list or parameters outside the suite's
/// range, CapExceeded when require_oracle is set and a cell is too large.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig & config);

/// Header n,alpha,k,eps,algorithm,branch,size,distortion,guarantee,
/// oracle_opt,seed,ms (plus result_hash when any row carries one).
std::string rows_to_csv(const std::vector<ExperimentRow> & rows);

/// FNV-1a 64-bit, 16 lowercase hex digits.
std::string fnv1a_hex(const std::string & data);

}  // namespace mdich
