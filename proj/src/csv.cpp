#include "qmarket/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace qmarket {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0; // normalize -0
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj, std::size_t downsample) {
    if (downsample < 1)
        throw std::invalid_argument("trajectory_csv: downsample must be >= 1");
    std::string out = "t,P,Im_r,delta_n,delta_k,delta_pi,valid\n";
    const double t_f = traj.validity.t_f.value_or(traj.grid.t0 + 1.0);
    for (std::size_t i = 0; i < traj.grid.size(); i += downsample) {
        const double t = traj.grid.t(i);
        out += format_number(t);
        out += ',';
        out += format_number(traj.price[i]);
        out += ',';
        out += format_number(traj.r[i].imag());
        out += ',';
        out += format_number(traj.delta_n[i]);
        out += ',';
        out += format_number(traj.delta_k[i]);
        out += ',';
        out += format_number(traj.delta_pi[i]);
        out += ',';
        out += (t < t_f) ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string summary_csv(const std::vector<GridRow>& rows) {
    std::string out = "scenario,schedule,min_delta_pi,max_delta_pi,t_f,no_transaction\n";
    for (const auto& row : rows) {
        out += to_string(row.id.case_id) + to_string(row.id.subcase_id);
        out += ',';
        out += row.id.schedule;
        out += ',';
        out += format_number(row.min_delta_pi);
        out += ',';
        out += format_number(row.max_delta_pi);
        out += ',';
        out += row.t_f ? format_number(*row.t_f) : std::string("full");
        out += ',';
        out += row.no_transaction ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    file << contents;
    if (!file)
        throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace qmarket
