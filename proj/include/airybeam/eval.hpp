#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "airybeam/design.hpp"
#include "airybeam/grid.hpp"
#include "airybeam/scenario.hpp"

namespace airybeam {

/// Complex gains from every transmit element to every receive element under
/// one blockage state, with the reference scale that makes rate numbers
/// comparable across schemes.
struct ChannelMatrix {
    std::size_t n_r = 0, n_t = 0;
    std::vector<Complex> a; ///< row-major, entry (r, t) at r * n_t + t
    bool blocked = false;
    double sigma_ref = 1.0; ///< largest singular value of the matching unblocked channel

    Complex& at(std::size_t r, std::size_t t) { return a[r * n_t + t]; }
    const Complex& at(std::size_t r, std::size_t t) const { return a[r * n_t + t]; }
};

struct LinkBudget {
    double rho = 1e4; ///< transmit-power to noise ratio (40 dB reference)
};

/// Simulate the channel column by column: each transmit element radiates
/// with unit weight, the field marches through the scenario (masks active
/// iff `blocked`), and the receive elements sample it.
ChannelMatrix build_channel(const Scenario& s, bool blocked, unsigned jobs = 0);

/// Set both channels' sigma_ref from the unblocked channel's largest
/// singular value.
void normalize_channel_pair(ChannelMatrix& h_los, ChannelMatrix& h_quasi);

/// Dominant singular pair (transmit, receive), unit norm, first nonzero
/// entry of each rotated real-positive.
std::pair<std::vector<Complex>, std::vector<Complex>> mrt_mrc(const ChannelMatrix& h);

/// Matched receive combiner for a given transmit vector: H w / |H w|.
std::vector<Complex> mrc_receive(const ChannelMatrix& h, const std::vector<Complex>& w_t);

/// Single-stream rate log2(1 + rho |w_r^H H w_t|^2 / sigma_ref^2).
double spectral_efficiency(const ChannelMatrix& h, const std::vector<Complex>& w_t,
                           const std::vector<Complex>& w_r, const LinkBudget& lb);

enum class Scheme {
    los_digital,
    quasilos_digital,
    steering,
    focusing,
    airy_closed_form,
    airy_exhaustive,
    upa_mode1,
    upa_mode2,
};

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

struct SearchGrids {
    std::vector<double> B;
    std::vector<double> F;
    std::vector<double> theta;

    /// B in [-15, 15] step 0.5 without |B| < 0.5; F 0.3..3.0 m step 0.1;
    /// theta -0.1..0.1 rad step 0.005.
    static SearchGrids defaults();
};

struct SearchResult {
    AiryParams params;
    double se = 0.0;
};

/// Brute-force sweep of the (B, F, theta) grid against the quasi-LoS
/// channel; deterministic lexicographic tie-break. For planar scenarios the
/// triple drives the bending dimension and the orthogonal dimension keeps
/// the hybrid-mode focusing profile.
SearchResult exhaustive_airy_search(const Scenario& s, const SearchGrids& grids,
                                    const LinkBudget& lb, const ChannelMatrix& h_quasi,
                                    unsigned jobs = 0);

struct SchemeContext {
    const ChannelMatrix* h_los = nullptr;
    const ChannelMatrix* h_quasi = nullptr;
    const DesignSolution* design = nullptr;      ///< closed-form solution
    const DesignSolution* design_mode2 = nullptr;///< planar dual-Airy solution
    const SearchResult* search = nullptr;        ///< exhaustive-search winner
};

/// Unit-norm transmit weights of a benchmark scheme plus the matched
/// quasi-LoS receive combiner.
std::pair<std::vector<Complex>, std::vector<Complex>> scheme_weights(const Scenario& s,
                                                                     Scheme scheme,
                                                                     const SchemeContext& ctx);

/// Disk cache of simulated channels keyed by a scenario digest; sweeps and
/// searches reuse columns instead of re-propagating.
class ChannelCache {
  public:
    explicit ChannelCache(std::filesystem::path dir);

    /// Fetch or build (and persist) the channel for a scenario state.
    ChannelMatrix get(const Scenario& s, bool blocked, unsigned jobs = 0);

    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
};

/// Canonical digest of everything that affects a simulated channel.
std::string scenario_digest(const Scenario& s);

struct SweepPoint {
    double z_b = 0.0;
    double edge = 0.0; ///< moving obstacle bound (replaces the blocked bound)
};

struct SweepRow {
    double z_b = 0.0;
    double edge = 0.0;
    double ratio = 0.0;
    std::string scheme;
    double se = 0.0;
    AiryParams x, y;
    std::string status = "ok";
};

/// Scenario with the single obstacle moved to (z_b, edge). The moving bound
/// is x_max when that side is blocked, x_min otherwise.
Scenario scenario_at_point(const Scenario& base, const SweepPoint& pt);

/// Evaluate every scheme at every family point; per-point failures land in
/// the status column and the sweep keeps going. Rows come out in
/// (point, scheme) order regardless of worker scheduling.
std::vector<SweepRow> sweep(const Scenario& base, const std::vector<SweepPoint>& family,
                            const std::vector<Scheme>& schemes, const LinkBudget& lb,
                            ChannelCache* cache = nullptr, unsigned jobs = 0,
                            const SearchGrids* grids = nullptr);

/// CSV serialization with the fixed header
/// z_b,edge,R_bl,scheme,SE_bits,Bx,Fx,thetax,By,Fy,thetay,status.
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace airybeam
