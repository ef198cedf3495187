#include "ptx/self_energy_moments.hpp"

#include "ptx/csv.hpp"
#include "ptx/eigen_sym.hpp"
#include "ptx/error.hpp"
#include "ptx/parallel.hpp"
#include "ptx/self_energy.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ptx {

SelfEnergyMoments sample_self_energy_moments(const SelfEnergyMomentRequest& request) {
  if (request.n_samples < 2) {
    throw DomainError("sample_self_energy_moments: need at least 2 samples");
  }
  request.reservoir.validate();
  if (!(request.v_k >= 0.0) || !(request.v_kp >= 0.0)) {
    throw DomainError("sample_self_energy_moments: coupling scales must be non-negative");
  }

  using Pair = std::pair<std::complex<double>, std::complex<double>>;
  const auto n = static_cast<std::size_t>(request.n_samples);
  std::vector<std::optional<Pair>> results(n);

  parallel_for(n, request.workers, [&](std::size_t i) {
    RandomStream stream(request.master_seed, request.first_substream + i);
    const GoeMatrix<double> h = sample_goe(request.reservoir, stream);
    Eigen::MatrixXd couplings(request.reservoir.size, 2);
    couplings.col(0) = sample_coupling(request.reservoir, request.v_k, stream);
    couplings.col(1) = sample_coupling(request.reservoir, request.v_kp, stream);
    try {
      const auto spec = eig_sym_projected(h, couplings);
      const double gamma = request.reservoir.gamma;
      results[i] = Pair{self_energy_spectral(spec, 0, 0, request.energy, gamma),
                        self_energy_spectral(spec, 0, 1, request.energy, gamma)};
    } catch (const ConvergenceError&) {
      results[i].reset();
    }
  });

  ComplexMomentAccumulator diagonal;
  ComplexMomentAccumulator off_diagonal;
  SelfEnergyMoments out;
  for (const auto& r : results) {
    if (!r) {
      ++out.failures;
      continue;
    }
    diagonal.add(r->first);
    off_diagonal.add(r->second);
  }
  if (out.failures > 0) {
    throw ConvergenceError("sample_self_energy_moments: eigensolver failed on " + std::to_string(out.failures) +
                           " of " + std::to_string(request.n_samples) + " samples");
  }
  out.diagonal = diagonal.summary();
  out.off_diagonal = off_diagonal.summary();
  return out;
}

std::string moment_csv_header() {
  return "N,v_g,v_k,v_k',Gamma,n_samples,re_mean,im_mean,re_sd,im_sd,abs2_mean,abs2_sd,cross_corr";
}

std::string moment_csv_row(const ReservoirParams& reservoir, double v_k, double v_kp, const MomentSummary& m) {
  using csv::number;
  return csv::join({std::to_string(reservoir.size), number(reservoir.v), number(v_k), number(v_kp),
                    number(reservoir.gamma), std::to_string(m.count), number(m.mean.real()), number(m.mean.imag()),
                    number(m.re_sd), number(m.im_sd), number(m.abs2_mean), number(m.abs2_sd),
                    number(m.cross_corr)});
}

}  // namespace ptx
