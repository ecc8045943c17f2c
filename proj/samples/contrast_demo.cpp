// Prints the quantum and hidden-variable contrasts for a pure state.
//
//   ./contrast_demo

#include <cstdio>

#include "nogo/nogo.hpp"

int main() {
    using namespace nogo;

    const Vec3 m{0.0, 0.6, 0.8};
    const DensityOperator psi = state_from_bloch(m);
    const SphericalGrid grid = default_grid();

    const double quantum = quantum_contrast(psi, grid);
    const HvContrast ks = hv_contrast(ks_model(m, 42), grid, Budget::samples(100000));
    const HvContrast dispersion_free =
        hv_contrast(deterministic_model(hemisphere_assignment), grid, Budget::exact());

    std::printf("quantum contrast          %.10f  (bound %.10f)\n", quantum, kQuantumBound);
    std::printf("KS sign model             %.10f  +- %.1e\n", ks.value, ks.std_error);
    std::printf("dispersion-free model     %.10f  (bound %.10f)\n", dispersion_free.value, kHvBound);
    std::printf("dispersion-free / quantum %.6f\n", dispersion_free.value / quantum);
}
