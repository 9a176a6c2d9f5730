#pragma once

namespace jjsim {

/// SI values of the physical constants the simulator needs (2018 CODATA/SI).
struct PhysicalConstants {
    double e = 1.602176634e-19;     // elementary charge [C], exact
    double hbar = 1.054571817e-34;  // reduced Planck constant [J s]
    double mu0 = 1.25663706212e-6;  // vacuum permeability [H/m]
    double c = 2.99792458e8;        // speed of light [m/s], exact
};

[[nodiscard]] constexpr PhysicalConstants codata() { return {}; }

}  // namespace jjsim
