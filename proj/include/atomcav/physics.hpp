#ifndef ATOMCAV_PHYSICS_HPP
#define ATOMCAV_PHYSICS_HPP

#include <vector>

#include "atomcav/rng.hpp"

namespace atomcav {

// All frequencies/rates are quoted as nu = omega/2pi in MHz; lengths in the
// unit named by each field.
struct CavityParams {
    double g0_max_MHz = 3.4;        // peak single-atom coupling
    double kappa_MHz = 2.6;         // cavity field decay
    double gamma_MHz = 1.1;         // atomic field decay
    double lambda_probe_nm = 852.0;
    double lambda_lock_nm = 851.4;
    double waist_um = 45.3;         // TEM00 mode waist
    double length_mm = 1.16;
    double finesse = 5.8e4;
    double beat_cycle_um = 386.8;   // lattice-node / mode-antinode overlap period

    // Throws std::domain_error on violated invariants.
    void validate() const;

    static CavityParams paper_2024() { return CavityParams{}; }
};

struct AtomSite {
    int index = 0;
    double axial_x_um = 0.0;      // along cavity axis, 0 = cavity center
    double transverse_r_um = 0.0; // radial offset from mode axis, >= 0
};

struct TweezerParams {
    int n_traps = 40;
    double spacing_um = 4.26;
    double trap_depth_mK = 0.9;
    double tweezer_waist_um = 1.6;
    double power_per_trap_mW = 10.0;

    void validate() const;

    // Array is centered on the cavity: trap i sits at (i - (n-1)/2) * spacing.
    double site_position_um(int index) const;
    double total_extent_um() const { return (n_traps - 1) * spacing_um; }

    static TweezerParams paper_2024() { return TweezerParams{}; }
};

// g0^2 / (2 kappa gamma)
double cooperativity(double g0_MHz, double kappa_MHz, double gamma_MHz);

// exp(-r^2 / waist^2): Gaussian falloff of the mode across the axis.
double transverse_coupling_factor(double r_um, double waist_um);

// |cos(pi x / beat_cycle)|: overlap of the lattice node with the mode
// antinode, unity at the cavity center, zero at half the beat cycle.
double axial_coupling_factor(double x_um, double beat_cycle_um);

// Displacement at which the lattice node sits on a probe-field node,
// lambda_lock * lambda_probe / (4 |lambda_probe - lambda_lock|), in um.
// The full overlap/decoupling cycle is twice this value.
double beat_decoupling_distance_um(double lambda_lock_nm, double lambda_probe_nm);

// g0_max * axial * transverse factors at the site.
double site_coupling_MHz(const CavityParams& params, const AtomSite& site);

// sqrt(sum g_i^2); reduces to g*sqrt(N) for uniform g. Empty list -> 0.
double effective_collective_coupling_MHz(const std::vector<double>& g_list_MHz);

// Zero-mean Gaussian positional jitter on both coordinates (one axial draw,
// two transverse draws folded back to a radius). sigma = 0 returns the site
// unchanged without consuming randomness.
AtomSite apply_position_jitter(const AtomSite& site, double sigma_um, RngStream& rng);

}  // namespace atomcav

#endif
