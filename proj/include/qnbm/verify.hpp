#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnbm/neuron.hpp"

namespace qnbm::verify {

struct Options {
    /// Neuron block under test; a flipped controlled angle is the mutation fixture.
    neuron::NeuronCircuit circuit{};
    std::uint64_t seed = 20240;
    unsigned random_neurons = 50;
    unsigned oracle_circuits = 500;
};

struct Check {
    std::string name;
    std::size_t cases = 0;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct Report {
    std::vector<Check> checks;
    bool passed() const;
};

Report run(const Options& options = {});

}  // namespace qnbm::verify
