#ifndef QMARKET_CSV_HPP
#define QMARKET_CSV_HPP

#include <string>
#include <vector>

#include "qmarket/scenario.hpp"

namespace qmarket {

/// Locale-independent decimal formatting, 9 significant digits.
std::string format_number(double value);

/// Columns: t,P,Im_r,delta_n,delta_k,delta_pi,valid. Row i is kept when
/// i % downsample == 0.
std::string trajectory_csv(const Trajectory& traj, std::size_t downsample = 1);

/// Columns: scenario,schedule,min_delta_pi,max_delta_pi,t_f,no_transaction;
/// t_f is "full" when the run stays valid over the whole horizon.
std::string summary_csv(const std::vector<GridRow>& rows);

void write_file(const std::string& path, const std::string& contents);

} // namespace qmarket

#endif
