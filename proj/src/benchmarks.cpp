#include <stdexcept>

#include "complab/experiments.hpp"

namespace complab {

const std::vector<Benchmark>& benchmark_catalog()
{
    static const std::vector<Benchmark> catalog = {
        {"bench-free", "free-particle box spectrum and kernel",
         "l = 0 free particle in a box of radius pi: momenta 1..50 and a vanishing kernel",
         "[potential]\nfamily = free\nR0_length = 1\n"
         "[experiment]\nkind = spectrum\nlabel = bench-free\n"
         "[numerics]\nR_length = 3.14159265358979323846\nk_max_momentum = 50.5\n"},
        {"bench-sw1", "box kernel vanishing",
         "square well (depth -3, R0 = 2) in a box of radius 20, accelerated kernel at M = 500, 1000, 2000",
         "[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
         "[experiment]\nkind = kernel-box\nlabel = bench-sw1\n"
         "[numerics]\nR_length = 20\nM_sequence = 500,1000,2000\naccelerated = true\n"},
        {"bench-coul-att", "open kernel with an attractive Coulomb tail",
         "square well with Vc = -2: open kernel at K = 200 while adding up to 25 bound terms",
         "[potential]\nfamily = square_well\ndepth_energy = -1\nR0_length = 2\nVc_strength = -2\n"
         "[experiment]\nkind = kernel-open\nlabel = bench-coul-att\n"
         "[numerics]\nK_momentum = 200\nN_bound = 25\nbound_sweep = true\n"},
        {"bench-coul-rep", "low-momentum Gamow suppression",
         "pure repulsive Coulomb Vc = 1: Gamow ratio over k = 0.2, 0.1, 0.05 at r = 0.5",
         "[potential]\nfamily = pure_coulomb\nVc_strength = 1\nR0_length = 1\n"
         "[experiment]\nkind = lowk-study\nlabel = bench-coul-rep\n"
         "[numerics]\nstudy = repulsive\nk_sequence_momentum = 0.2,0.1,0.05\n"},
        {"bench-nonlocal", "large-momentum WKB form and non-local invisibility",
         "square well plus a Gaussian non-local part (strength 2, width 0.5): WKB defect and non-local change vs k",
         "[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
         "nonlocal_strength_energy = 2\nnonlocal_width_length = 0.5\n"
         "[experiment]\nkind = wkb-check\nlabel = bench-nonlocal\n"},
        {"bench-delta", "Coulomb delta kernel",
         "free closed form, smeared weak limit and Dirichlet frequency at K = 150 for Vc = 0, 1, 3",
         "[potential]\nfamily = free\n"
         "[experiment]\nkind = coulomb-delta\nlabel = bench-delta\n"
         "[numerics]\nK_momentum = 150\nVc_sequence_strength = 0,1,3\n"},
        {"bench-expand", "expansion midpoint law",
         "step target with a jump at r = 5 expanded on square-well box states, M = 250, 500, 1000",
         "[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
         "[experiment]\nkind = expand\nlabel = bench-expand\n"
         "[numerics]\nR_length = 20\ntarget = step\nstep_length = 5\nM_sequence = 250,500,1000\n"},
        {"bench-riemann", "box sum versus open integral",
         "square well: sum minus integral at (1, 1.5) over R = 20, 40, 80 and the K sweep of the rest",
         "[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
         "[experiment]\nkind = riemann-study\nlabel = bench-riemann\n"
         "[numerics]\nR_sequence_length = 20,40,80\nK_momentum = 10\nK_sequence_momentum = 5,10,20,40,80\n"
         "r_length = 1\nrp_length = 1.5\n"},
        {"bench-normseries", "finite-box normalization defect series",
         "square well: series of normalization defects at (1, 1.5) over R = 20 .. 160 with k_eps = 0.5",
         "[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
         "[experiment]\nkind = normseries-study\nlabel = bench-normseries\n"
         "[numerics]\nR_sequence_length = 20,40,80,160\nk_eps_momentum = 0.5\nk_max_momentum = 30\n"
         "r_length = 1\nrp_length = 1.5\n"},
        {"bench-eigenmomentum", "large-index eigenmomentum expansion",
         "square well in a box of radius 20: predicted k_m against the solver for m in [20, 200]",
         "[potential]\nfamily = square_well\ndepth_energy = -3\nR0_length = 2\n"
         "[experiment]\nkind = scaling-study\nlabel = bench-eigenmomentum\n"
         "[numerics]\nstudy = eigenmomentum\nR_length = 20\nm_lo = 20\nm_hi = 200\n"},
        {"bench-specfun", "Coulomb wave functions",
         "Wronskian over 1000 seeded random (l, eta, rho) and the eta -> 0 Riccati-Bessel limit",
         "[experiment]\nkind = specfun-probe\nlabel = bench-specfun\n"
         "[numerics]\nsamples = 1000\n"},
        {"bench-bound-scaling", "high-lying bound states of an attractive Coulomb tail",
         "square well with Vc = -2 in a box of radius 1500: kappa_n and u_n(1) against n for n in [4, 12]",
         "[potential]\nfamily = square_well\ndepth_energy = -1\nR0_length = 2\nVc_strength = -2\n"
         "[experiment]\nkind = scaling-study\nlabel = bench-bound-scaling\n"
         "[numerics]\nstudy = bound-scaling\nR_length = 1500\nn_lo = 4\nn_hi = 12\n"},
    };
    return catalog;
}

const Benchmark& find_benchmark(const std::string& name)
{
    for (const Benchmark& b : benchmark_catalog())
        if (b.name == name) return b;
    throw std::invalid_argument("unknown benchmark '" + name + "'");
}

}  // namespace complab
