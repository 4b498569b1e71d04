// Walks the 4D Smorodinski-Winternitz structure through every stage and
// prints the superintegrable Hamiltonian with its integrals.

#include <iostream>

#include "hfsi/hfsi.hpp"

int main() {
    using namespace hfsi;

    HesseFrobenius hf = catalog("sw4d");
    std::cout << "axioms hold: " << std::boolalpha << check_axioms(hf).passed() << "\n";

    PotentialFamily family = solve_potentials(hf);
    std::cout << "potentials (" << family.size() << "):\n";
    for (const auto& v : family.basis) std::cout << "  " << v.str() << "\n";

    CompatibleSystem sys = compatible_killing(hf, family);
    std::cout << "compatible Killing tensors: " << sys.size() << " of " << sys.killing_space_dim << "\n";

    Certificate cert = certify(sys, 1, "sw4d");
    std::cout << "H = " << cert.integrals.front().str() << "\n";
    std::cout << "rank " << cert.rank << " of " << cert.target << ", valid " << cert.valid() << "\n";
}
