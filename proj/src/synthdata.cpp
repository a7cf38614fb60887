#include "rvfl/synthdata.hpp"

#include "rvfl/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace rvfl {

std::string_view to_string(TargetFunction tf) {
    switch (tf) {
        case TargetFunction::NL: return "NL";
        case TargetFunction::NLF: return "NLF";
        case TargetFunction::NLF_L: return "NLF_L";
        case TargetFunction::L: return "L";
    }
    return "?";
}

TargetFunction parse_target(std::string_view name) {
    if (name == "NL") return TargetFunction::NL;
    if (name == "NLF") return TargetFunction::NLF;
    if (name == "NLF_L" || name == "NLF+L") return TargetFunction::NLF_L;
    if (name == "L") return TargetFunction::L;
    throw InvalidParameter("unknown target function '" + std::string(name) +
                           "' (expected NL, NLF, NLF_L or L)");
}

TargetFlags target_flags(TargetFunction tf) {
    switch (tf) {
        case TargetFunction::NLF: return {true, false};
        case TargetFunction::NLF_L: return {true, true};
        case TargetFunction::L: return {false, true};
        case TargetFunction::NL: break;
    }
    return {};
}

double eval_target(TargetFunction tf, const Vector& x) {
    if (tf == TargetFunction::NL) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double d = x(j) - 0.5;
            s += d * d;
        }
        return std::exp(-s);
    }
    const TargetFlags flags = target_flags(tf);
    double fluct = 0.0;
    double lin = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double xj = x(j);
        if (flags.fluctuation) fluct += std::sin(20.0 * std::exp(xj)) * xj * xj;
        if (flags.linear) lin += xj;
    }
    return fluct + 3.0 * lin;
}

Vector eval_target(TargetFunction tf, const Matrix& x) {
    Vector out(x.rows());
    for (Eigen::Index l = 0; l < x.rows(); ++l) out(l) = eval_target(tf, Vector(x.row(l).transpose()));
    return out;
}

namespace {

Matrix sample_inputs(std::size_t n, std::size_t count, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix x(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
    for (Eigen::Index l = 0; l < x.rows(); ++l) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(l, j) = unit(rng);
    }
    return x;
}

void check_sizes(std::size_t n, std::size_t count) {
    if (n < 1) throw InvalidParameter("input dimension must be >= 1");
    if (count < 1) throw InvalidParameter("sample count must be >= 1");
}

}  // namespace

Dataset sample_dataset(TargetFunction tf, std::size_t n, std::size_t count, double noise_sigma,
                       const RngStream& stream) {
    check_sizes(n, count);
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidParameter("noise_sigma must be finite and >= 0");
    }
    Rng rng = stream.engine();
    Dataset d;
    d.x = sample_inputs(n, count, rng);
    d.y = eval_target(tf, d.x);
    d.noise_sigma = noise_sigma;
    d.provenance = stream.describe();
    if (noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (Eigen::Index l = 0; l < d.y.size(); ++l) d.y(l) += noise(rng);
    }
    return d;
}

Dataset make_test_set(TargetFunction tf, std::size_t n, std::size_t count,
                      const RngStream& stream) {
    return sample_dataset(tf, n, count, 0.0, stream);
}

void write_csv(std::ostream& os, const Dataset& data) {
    const auto n = data.x.cols();
    for (Eigen::Index j = 0; j < n; ++j) os << 'x' << (j + 1) << ',';
    os << "y\n";
    const auto old_precision = os.precision();
    os << std::setprecision(17);
    for (Eigen::Index l = 0; l < data.x.rows(); ++l) {
        for (Eigen::Index j = 0; j < n; ++j) os << data.x(l, j) << ',';
        os << data.y(l) << '\n';
    }
    os.precision(old_precision);
}

Dataset read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("CSV: missing header");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2 || header.back() != "y") {
        throw InvalidInput("CSV: header must be x1,...,xn,y");
    }
    const std::size_t n = header.size() - 1;
    for (std::size_t j = 0; j < n; ++j) {
        if (header[j] != "x" + std::to_string(j + 1)) {
            throw InvalidInput("CSV: unexpected header column '" + header[j] + "'");
        }
    }

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InvalidInput("CSV line " + std::to_string(line_no) + ": bad number '" +
                                   cell + "'");
            }
            ++count;
        }
        if (count != n + 1) {
            throw InvalidInput("CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(n + 1) + " fields");
        }
        ++rows;
    }
    if (rows == 0) throw InvalidInput("CSV: no data rows");

    Dataset d;
    d.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
    d.y.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t l = 0; l < rows; ++l) {
        for (std::size_t j = 0; j < n; ++j) {
            d.x(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) =
                values[l * (n + 1) + j];
        }
        d.y(static_cast<Eigen::Index>(l)) = values[l * (n + 1) + n];
    }
    d.provenance = "csv";
    return d;
}

}  // namespace rvfl
