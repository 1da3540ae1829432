#include "geit/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "geit/errors.hpp"

namespace geit {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw ValidationError("number formatting failed");
    return std::string(buf, p);
}

std::string format_double(double v, int significant_digits) {
    char buf[80];
    auto [p, ec] =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant_digits);
    if (ec != std::errc()) throw ValidationError("number formatting failed");
    return std::string(buf, p);
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw ValidationError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ValidationError("cannot move output into place: " + path.string() + " (" +
                              ec.message() + ")");
    }
}

namespace {

constexpr int kCsvDigits = 17;

void append_field(std::string& row, double v) {
    row += format_double(v, kCsvDigits);
}

}  // namespace

std::string spectrum_csv(const Spectrum& spectrum) {
    std::string out = "delta_31,T,re_t,im_t,lamb_shift,gamma_eff,shift_b,decay_b\n";
    for (const auto& pt : spectrum) {
        std::string row;
        append_field(row, pt.delta_31);
        row += ',';
        append_field(row, pt.transmittance);
        row += ',';
        append_field(row, pt.t.real());
        row += ',';
        append_field(row, pt.t.imag());
        row += ',';
        append_field(row, pt.lamb_shift);
        row += ',';
        append_field(row, pt.decay_eff);
        row += ',';
        append_field(row, pt.shift_b);
        row += ',';
        append_field(row, pt.decay_b);
        row += '\n';
        out += row;
    }
    return out;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out = "t";
    const char* labels[3] = {"1", "2", "3"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            out += std::string(",re_rho_") + labels[i] + labels[j];
            out += std::string(",im_rho_") + labels[i] + labels[j];
        }
    out += '\n';
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        std::string row;
        append_field(row, trajectory.times[k]);
        const DensityMatrix& rho = trajectory.states[k];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                row += ',';
                append_field(row, rho(i, j).real());
                row += ',';
                append_field(row, rho(i, j).imag());
            }
        row += '\n';
        out += row;
    }
    return out;
}

}  // namespace geit
