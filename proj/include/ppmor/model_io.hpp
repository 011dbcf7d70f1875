#pragma once

// JSON model files: {"n", "m", "A", "B", "C", "D"} as row-major nested arrays,
// optionally followed by the port-Hamiltonian blocks J, R, Q, G, P, N, S.

#include <optional>
#include <string>

#include "ppmor/model.hpp"

namespace ppmor {

struct ModelFile {
  StateSpaceModel model;
  std::optional<PortHamiltonianModel> ph;
};

// Throws InvalidInput on malformed documents, shape mismatches, non-finite
// numbers, or pH blocks that disagree with A, B, C, D.
ModelFile parse_model(const std::string& text);
ModelFile read_model_file(const std::string& path);

std::string dump_model(const StateSpaceModel& model, const PortHamiltonianModel* ph = nullptr);
void write_model_file(const std::string& path, const StateSpaceModel& model, const PortHamiltonianModel* ph = nullptr);

}  // namespace ppmor
