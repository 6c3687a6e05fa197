#include "qtm/spa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtm/errors.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

void validate(const MCParams& p, int lattice_l) {
  if (!(p.beta > 0.0)) throw config_error("beta must be positive");
  if (p.u < 0.0) throw config_error("u must be non-negative");
  if (p.n_therm < 0 || p.n_meas < 0) throw config_error("sweep counts must be >= 0");
  if (p.cluster_l < 1 || p.cluster_l > lattice_l) {
    throw config_error("cluster_l must be in [1, l], got " + std::to_string(p.cluster_l));
  }
  if (!(p.move_width > 0.0) || !(p.m_cap > 0.0)) {
    throw config_error("move_width and m_cap must be positive");
  }
  if (p.measure_every < 1) throw config_error("measure_every must be >= 1");
}

EffectiveHamiltonian build_h_eff(const LatticeGeometry& g, const AuxFieldConfig& f,
                                 double u, double mu) {
  const int n = g.n_sites();
  if (!f.m.empty() && static_cast<int>(f.m.size()) != n) {
    throw config_error("field size " + std::to_string(f.m.size()) +
                       " does not match lattice with " + std::to_string(n) + " sites");
  }
  EffectiveHamiltonian h;
  h.dim = 2 * n;
  h.matrix = HermitianMatrix(h.dim);
  const double diag = 0.5 * u - mu;
  for (int i = 0; i < n; ++i) {
    const int up = 2 * i;
    const int dn = up + 1;
    h.matrix.at(up, up) = diag;
    h.matrix.at(dn, dn) = diag;
    if (!f.m.empty()) {
      const auto& m = f.m[i];
      const double c = -0.5 * u;
      h.matrix.at(up, up) += c * m[2];
      h.matrix.at(dn, dn) -= c * m[2];
      const Complex off = c * Complex(m[0], -m[1]);
      h.matrix.at(up, dn) += off;
      h.matrix.at(dn, up) += std::conj(off);
    }
  }
  g.for_each_bond([&](const Bond& b) {
    for (int s = 0; s < 2; ++s) {
      h.matrix.at(2 * b.i + s, 2 * b.j + s) += b.amplitude;
      h.matrix.at(2 * b.j + s, 2 * b.i + s) += b.amplitude;
    }
  });
  if (!f.m.empty()) {
    double m2 = 0.0;
    for (const auto& m : f.m) m2 += m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
    h.stiffness = 0.25 * u * m2;
  }
  h.spectrum = eigenvalues(h.matrix);
  return h;
}

double fermionic_free_energy(std::span<const double> spectrum, double beta,
                             double stiffness) {
  double s = 0.0;
  for (double e : spectrum) s += softplus(-beta * e);
  return -s / beta + stiffness;
}

double config_free_energy(const EffectiveHamiltonian& h, double beta) {
  if (!(beta > 0.0)) throw config_error("beta must be positive");
  return fermionic_free_energy(h.spectrum, beta, h.stiffness);
}

double density_from_spectrum(std::span<const double> spectrum, double beta, int n_sites) {
  double n = 0.0;
  for (double e : spectrum) n += fermi_of(beta * e);
  return n / n_sites;
}

MonteCarlo::MonteCarlo(const LatticeGeometry& g, const MCParams& params)
    : geom_(&g), params_(params), move_width_(params.move_width), nc_(params.cluster_l) {
  validate(params_, g.l);
  field_.m.resize(g.n_sites());
  field_.phi_saddle = 0.5 * params_.u;  // <n_i> = 1 at half filling
  RandomEngine rng(derive_seed(params_.seed, 0xC0FFEE));
  for (auto& m : field_.m) m = uniform_in_ball(rng, 1.0);
  const int dim = 2 * 3 * nc_ * nc_;
  cluster_h_ = HermitianMatrix(dim);
  cluster_site_of_local_.assign(static_cast<std::size_t>(3) * nc_ * nc_, -1);
}

void MonteCarlo::set_beta(double beta) {
  if (!(beta > 0.0)) throw config_error("beta must be positive");
  params_.beta = beta;
}

void MonteCarlo::apply_zeeman(HermitianMatrix& h, int local,
                              const std::array<double, 3>& m) const {
  const double c = -0.5 * params_.u;
  const int up = 2 * local;
  const int dn = up + 1;
  h.at(up, up) += c * m[2];
  h.at(dn, dn) -= c * m[2];
  const Complex off = c * Complex(m[0], -m[1]);
  h.at(up, dn) += off;
  h.at(dn, up) += std::conj(off);
}

// Cluster of nc_ x nc_ cells around the update site's cell. For nc_ < l the
// window is an open patch (bonds leaving it are dropped); for nc_ == l the
// window wraps and reproduces the full periodic lattice.
void MonteCarlo::fill_cluster_matrix(int center_site) {
  const int l = geom_->l;
  const int cell = center_site / 3;
  const int cx = cell / l;
  const int cy = cell % l;
  const int ox = cx - nc_ / 2;
  const int oy = cy - nc_ / 2;
  std::fill(cluster_h_.a.begin(), cluster_h_.a.end(), Complex(0.0, 0.0));
  const double diag = 0.5 * params_.u - params_.mu;

  auto local_site = [&](int wx, int wy, int s) { return (wx * nc_ + wy) * 3 + s; };

  for (int wx = 0; wx < nc_; ++wx) {
    for (int wy = 0; wy < nc_; ++wy) {
      for (int s = 0; s < 3; ++s) {
        const int loc = local_site(wx, wy, s);
        const int glob = geom_->site_index(ox + wx, oy + wy, static_cast<Sublattice>(s));
        cluster_site_of_local_[loc] = glob;
        cluster_h_.at(2 * loc, 2 * loc) = diag;
        cluster_h_.at(2 * loc + 1, 2 * loc + 1) = diag;
        apply_zeeman(cluster_h_, loc, field_.m[glob]);
        if (glob == center_site) center_local_ = loc;
      }
    }
  }

  // Endpoint window coordinate, or -1 if the bond leaves the open patch.
  auto wrap_or_cut = [&](int w) {
    if (nc_ == l) return ((w % nc_) + nc_) % nc_;
    return (w >= 0 && w < nc_) ? w : -1;
  };
  const auto stencil = bond_stencil(geom_->hoppings);
  for (int wx = 0; wx < nc_; ++wx) {
    for (int wy = 0; wy < nc_; ++wy) {
      for (const StencilBond& sb : stencil) {
        const int ax = wrap_or_cut(wx + sb.da[0]);
        const int ay = wrap_or_cut(wy + sb.da[1]);
        const int bx = wrap_or_cut(wx + sb.db[0]);
        const int by = wrap_or_cut(wy + sb.db[1]);
        if (ax < 0 || ay < 0 || bx < 0 || by < 0) continue;
        const int i = local_site(ax, ay, static_cast<int>(sb.sa));
        const int j = local_site(bx, by, static_cast<int>(sb.sb));
        for (int s = 0; s < 2; ++s) {
          cluster_h_.at(2 * i + s, 2 * j + s) += sb.amplitude;
          cluster_h_.at(2 * j + s, 2 * i + s) += sb.amplitude;
        }
      }
    }
  }
}

double MonteCarlo::cluster_delta_f(int site, const std::array<double, 3>& m_new) {
  fill_cluster_matrix(site);
  eigenvalues_into(cluster_h_, eig_work_, eig_vals_);
  const double f_before = fermionic_free_energy(eig_vals_, params_.beta, 0.0);

  // Swap the proposal into the center site's Zeeman block: the entry is
  // -(U/2) m, so replacing m_old -> m_new adds -(U/2) (m_new - m_old).
  const auto& m_old = field_.m[site];
  const double c = 0.5 * params_.u;
  const int up = 2 * center_local_;
  const int dn = up + 1;
  cluster_h_.at(up, up) -= c * (m_new[2] - m_old[2]);
  cluster_h_.at(dn, dn) += c * (m_new[2] - m_old[2]);
  const Complex doff = -c * Complex(m_new[0] - m_old[0], -(m_new[1] - m_old[1]));
  cluster_h_.at(up, dn) += doff;
  cluster_h_.at(dn, up) += std::conj(doff);

  eigenvalues_into(cluster_h_, eig_work_, eig_vals_);
  const double f_after = fermionic_free_energy(eig_vals_, params_.beta, 0.0);

  const double dm2 = m_new[0] * m_new[0] + m_new[1] * m_new[1] + m_new[2] * m_new[2] -
                     (m_old[0] * m_old[0] + m_old[1] * m_old[1] + m_old[2] * m_old[2]);
  return f_after - f_before + 0.25 * params_.u * dm2;
}

// The proposal draw is shared by both dF backends so their random streams
// are identical by construction; the acceptance uniform is drawn even for
// downhill moves for the same reason.
MonteCarlo::Proposal MonteCarlo::draw_proposal(RandomEngine& rng, int site) const {
  const auto step = uniform_in_ball(rng, move_width_);
  Proposal p;
  p.m_new = {field_.m[site][0] + step[0], field_.m[site][1] + step[1],
             field_.m[site][2] + step[2]};
  const double norm = std::sqrt(p.m_new[0] * p.m_new[0] + p.m_new[1] * p.m_new[1] +
                                p.m_new[2] * p.m_new[2]);
  if (norm > params_.m_cap) {
    const double s = params_.m_cap / norm;
    p.m_new = {p.m_new[0] * s, p.m_new[1] * s, p.m_new[2] * s};
  }
  p.u01 = uniform01(rng);
  return p;
}

double MonteCarlo::sweep(std::vector<std::uint8_t>* decisions) {
  RandomEngine rng(derive_seed(params_.seed, static_cast<std::uint64_t>(sweep_counter_)));
  ++sweep_counter_;
  const int n = geom_->n_sites();
  if (decisions) decisions->assign(n, 0);
  int accepted = 0;
  for (int i = 0; i < n; ++i) {
    const Proposal p = draw_proposal(rng, i);
    const double df = cluster_delta_f(i, p.m_new);
    if (metropolis_accept(df, params_.beta, p.u01)) {
      field_.m[i] = p.m_new;
      ++accepted;
      if (decisions) (*decisions)[i] = 1;
    }
  }
  return static_cast<double>(accepted) / n;
}

double MonteCarlo::sweep_full_reference(std::vector<std::uint8_t>* decisions) {
  RandomEngine rng(derive_seed(params_.seed, static_cast<std::uint64_t>(sweep_counter_)));
  ++sweep_counter_;
  const int n = geom_->n_sites();
  if (decisions) decisions->assign(n, 0);
  int accepted = 0;
  for (int i = 0; i < n; ++i) {
    const Proposal p = draw_proposal(rng, i);
    const EffectiveHamiltonian before = build_h_eff(*geom_, field_, params_.u, params_.mu);
    AuxFieldConfig trial = field_;
    trial.m[i] = p.m_new;
    const EffectiveHamiltonian after = build_h_eff(*geom_, trial, params_.u, params_.mu);
    const double df =
        config_free_energy(after, params_.beta) - config_free_energy(before, params_.beta);
    if (metropolis_accept(df, params_.beta, p.u01)) {
      field_.m[i] = p.m_new;
      ++accepted;
      if (decisions) (*decisions)[i] = 1;
    }
  }
  return static_cast<double>(accepted) / n;
}

void MonteCarlo::adapt_move_width(double acceptance_rate) {
  if (!params_.adapt_move) return;
  if (acceptance_rate < 0.30) {
    move_width_ = std::max(0.02, move_width_ * 0.7);
  } else if (acceptance_rate > 0.50) {
    move_width_ = std::min(params_.m_cap, move_width_ * 1.3);
  }
}

std::vector<double> MonteCarlo::full_spectrum() const {
  return build_h_eff(*geom_, field_, params_.u, params_.mu).spectrum;
}

double tune_mu_half_filling(const LatticeGeometry& g, const MCParams& params) {
  validate(params, g.l);
  const int n_therm = std::max(10, params.n_therm);
  const int n_meas = std::max(5, params.n_meas);

  auto density_at = [&](double mu, std::uint64_t salt) {
    MCParams p = params;
    p.mu = mu;
    p.seed = derive_seed(params.seed, 0x3A5F00 + salt);
    MonteCarlo mc(g, p);
    for (int s = 0; s < n_therm; ++s) mc.adapt_move_width(mc.sweep());
    double acc = 0.0;
    int count = 0;
    for (int s = 0; s < n_meas; ++s) {
      mc.sweep();
      if (s % params.measure_every == 0) {
        const auto spec = mc.full_spectrum();
        acc += density_from_spectrum(spec, p.beta, g.n_sites());
        ++count;
      }
    }
    return acc / count;
  };

  double lo = 0.5 * params.u - 6.0;
  double hi = 0.5 * params.u + 6.0;
  double d_lo = density_at(lo, 0);
  double d_hi = density_at(hi, 1);
  int widen = 0;
  while ((d_lo > 1.0 || d_hi < 1.0) && widen < 2) {
    lo -= 6.0;
    hi += 6.0;
    d_lo = density_at(lo, 2 + widen);
    d_hi = density_at(hi, 4 + widen);
    ++widen;
  }
  if (d_lo > 1.0 || d_hi < 1.0) {
    throw config_error("half-filling bisection bracket not found in mu range [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 40; ++it) {
    mu = 0.5 * (lo + hi);
    const double d = density_at(mu, 16 + it);
    if (std::abs(d - 1.0) <= params.half_fill_tol) return mu;
    (d < 1.0 ? lo : hi) = mu;
    if (hi - lo < 1e-4) break;
  }
  return mu;
}

}  // namespace qtm
