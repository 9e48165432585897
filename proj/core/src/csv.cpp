#include "fst/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fst {

namespace {

void put_double(std::ostream& os, double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    os.write(buf, res.ptr - buf);
}

double get_double(const std::string& field, std::size_t line_no) {
    double x = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc{} || res.ptr != last) {
        std::ostringstream os;
        os << "malformed numeric field '" << field << "' on line " << line_no;
        throw Error(os.str());
    }
    return x;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const TrajectoryPair& pair,
                          double t_lo, double t_hi) {
    os << "t,a,adot,b,bdot\n";
    const std::size_t n = pair.a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = pair.a.node_time(i);
        if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
        const PhaseSample sb = pair.b.eval(t);
        put_double(os, t);
        os.put(',');
        put_double(os, pair.a.node_pos(i));
        os.put(',');
        put_double(os, pair.a.node_vel(i));
        os.put(',');
        put_double(os, sb.pos);
        os.put(',');
        put_double(os, sb.vel);
        os.put('\n');
    }
}

TrajectoryCsv read_trajectory_csv(std::istream& is) {
    TrajectoryCsv out;
    std::string line;
    if (!std::getline(is, line)) throw Error("empty trajectory CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,a,adot,b,bdot")
        throw Error("trajectory CSV must start with header 't,a,adot,b,bdot'");

    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<std::string, 5> fields;
        std::size_t start = 0, k = 0;
        for (; k < 5; ++k) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields[k] = line.substr(start);
                start = line.size() + 1;
                ++k;
                break;
            }
            fields[k] = line.substr(start, comma - start);
            start = comma + 1;
        }
        if (k != 5 || start <= line.size()) {
            std::ostringstream os;
            os << "expected 5 comma-separated fields on line " << line_no;
            throw Error(os.str());
        }
        out.t.push_back(get_double(fields[0], line_no));
        out.a.push_back(get_double(fields[1], line_no));
        out.adot.push_back(get_double(fields[2], line_no));
        out.b.push_back(get_double(fields[3], line_no));
        out.bdot.push_back(get_double(fields[4], line_no));
    }
    if (out.t.size() < 2) throw Error("trajectory CSV needs at least two rows");
    return out;
}

TrajectoryPair pair_from_csv(const TrajectoryCsv& csv,
                             const AsymptoticData& data, double extrap_width) {
    const std::size_t n = csv.t.size();
    const double step = csv.t[1] - csv.t[0];
    if (!(step > 0.0)) throw Error("CSV times must be strictly increasing");

    TrajectoryBuilder ba(csv.t[0], step);
    TrajectoryBuilder bb(csv.t[0], step);
    ba.set_tail(AsymptoteTail::from(data, Particle::A));
    bb.set_tail(AsymptoteTail::from(data, Particle::B));
    ba.set_right_edge({extrap_width});
    bb.set_right_edge({extrap_width});
    for (std::size_t i = 0; i < n; ++i) {
        ba.append_node(csv.t[i], csv.a[i], csv.adot[i]);
        bb.append_node(csv.t[i], csv.b[i], csv.bdot[i]);
    }
    return {ba.freeze(), bb.freeze()};
}

}  // namespace fst
