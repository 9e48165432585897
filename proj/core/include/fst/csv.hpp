#ifndef FST_CSV_HPP
#define FST_CSV_HPP

#include <iosfwd>
#include <vector>

#include "fst/trajectory.hpp"

namespace fst {

/// Column-wise image of a trajectory CSV (header `t,a,adot,b,bdot`).
struct TrajectoryCsv {
    std::vector<double> t;
    std::vector<double> a;
    std::vector<double> adot;
    std::vector<double> b;
    std::vector<double> bdot;
};

/// Writes one row per node of the pair's common grid (the a-grid restricted
/// to [t_lo, t_hi]); doubles are printed in shortest round-trip form.
void write_trajectory_csv(std::ostream& os, const TrajectoryPair& pair,
                          double t_lo, double t_hi);

/// Parses the documented schema; throws Error on malformed input.
TrajectoryCsv read_trajectory_csv(std::istream& is);

/// Rebuilds a trajectory pair from CSV columns, attaching the asymptote
/// tails derived from `data` and the given extrapolation margin.
TrajectoryPair pair_from_csv(const TrajectoryCsv& csv,
                             const AsymptoticData& data, double extrap_width);

}  // namespace fst

#endif
