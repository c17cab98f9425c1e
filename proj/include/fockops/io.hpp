#ifndef FOCKOPS_IO_HPP
#define FOCKOPS_IO_HPP

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fockops/observables.hpp"

// Data-file writers for the CLI. Numeric cells use the shortest decimal
// representation that round-trips binary64, so identical runs produce
// byte-identical files and reloading loses nothing.

namespace fockops {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_pnd_csv(std::ostream& os, const std::vector<double>& probabilities) {
    os << "n,probability\n";
    for (std::size_t n = 0; n < probabilities.size(); ++n)
        os << n << ',' << format_double(probabilities[n]) << '\n';
}

inline void write_wigner_csv(std::ostream& os, const wigner_grid& grid) {
    os << "re,im,w\n";
    for (std::size_t i = 0; i < grid.points_per_axis; ++i)
        for (std::size_t j = 0; j < grid.points_per_axis; ++j)
            os << format_double(grid.re_coord(i)) << ',' << format_double(grid.im_coord(j)) << ','
               << format_double(grid.at(i, j)) << '\n';
}

/// Sweep rows x,q with an optional q_closed column. Entries of q_closed may
/// be absent (singular closed branch); those cells are left empty.
inline void write_sweep_csv(std::ostream& os, const std::vector<double>& xs,
                            const std::vector<double>& qs,
                            const std::vector<std::optional<double>>* q_closed = nullptr) {
    const bool with_closed = q_closed != nullptr;
    os << (with_closed ? "x,q,q_closed\n" : "x,q\n");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << format_double(xs[i]) << ',' << format_double(qs[i]);
        if (with_closed) {
            os << ',';
            if ((*q_closed)[i].has_value()) os << format_double(*(*q_closed)[i]);
        }
        os << '\n';
    }
}

}  // namespace fockops

#endif
