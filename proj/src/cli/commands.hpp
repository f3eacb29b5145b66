// Experiment commands: phantom rasterization, sinogram simulation, single
// reconstructions, and method comparisons, all emitting deterministic files
// into the configured output directory.

#ifndef CTCLI_COMMANDS_HPP
#define CTCLI_COMMANDS_HPP

#include "cli/config.hpp"

namespace ctcli {

/// Writes phantom.bimg and phantom.pgm.
int cmd_phantom(const ExperimentConfig& config);

/// Writes sinogram_clean.bsin and the noisy realization sinogram.bsin.
int cmd_project(const ExperimentConfig& config);

/// Runs the configured solver once; writes trace.csv, rel_error.csv,
/// reconstruction.bimg, and reconstruction.pgm.
int cmd_reconstruct(const ExperimentConfig& config);

/// Runs the configured comparison; writes summary.csv, phase_plane.csv, and
/// (for the incremental flavor) matched_f0.csv.
int cmd_compare(const ExperimentConfig& config);

}  // namespace ctcli

#endif
