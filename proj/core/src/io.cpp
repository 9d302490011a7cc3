#include "rpf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rpf {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json grid_path_to_json(const GridPath& p, const json& metadata) {
    json j;
    j["times"] = p.grid().times();
    json vals = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        json row = json::array();
        for (int c = 0; c < p.dim(); ++c) row.push_back(p.value(i)[c]);
        vals.push_back(row);
    }
    j["values"] = vals;
    j["dim"] = p.dim();
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
}

GridPath grid_path_from_json(const json& j) {
    TimeGrid grid(j.at("times").get<std::vector<double>>());
    int dim = j.at("dim").get<int>();
    std::vector<Vec> vals;
    for (const auto& row : j.at("values")) {
        Vec v(dim);
        for (int c = 0; c < dim; ++c) v[c] = row.at(c).get<double>();
        vals.push_back(v);
    }
    return GridPath(grid, std::move(vals));
}

json rough_path_to_json(const RoughPath& rp, const json& metadata) {
    json j;
    j["path"] = grid_path_to_json(rp.path());
    json lvl = json::array();
    for (const auto& m : rp.level2()) {
        json mm = json::array();
        for (int r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            mm.push_back(row);
        }
        lvl.push_back(mm);
    }
    j["level2"] = lvl;
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
}

RoughPath rough_path_from_json(const json& j) {
    GridPath p = grid_path_from_json(j.at("path"));
    const int d = p.dim();
    std::vector<Mat> lvl;
    for (const auto& mm : j.at("level2")) {
        Mat m(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m(r, c) = mm.at(r).at(c).get<double>();
        lvl.push_back(m);
    }
    return RoughPath(std::move(p), std::move(lvl));
}

json events_to_json(const MarkedEventStream& es) {
    json j;
    json evs = json::array();
    for (const auto& e : es.events) {
        json je;
        je["time"] = e.time;
        json mk = json::array();
        for (int c = 0; c < e.mark.size(); ++c) mk.push_back(e.mark[c]);
        je["mark"] = mk;
        je["kept"] = e.kept;
        evs.push_back(je);
    }
    j["events"] = evs;
    json atoms = json::array();
    for (const auto& a : es.nu.atoms) {
        json ja;
        json mk = json::array();
        for (int c = 0; c < a.first.size(); ++c) mk.push_back(a.first[c]);
        ja["mark"] = mk;
        ja["weight"] = a.second;
        atoms.push_back(ja);
    }
    j["nu_atoms"] = atoms;
    return j;
}

MarkedEventStream events_from_json(const json& j) {
    MarkedEventStream es;
    for (const auto& je : j.at("events")) {
        MarkedEvent e;
        e.time = je.at("time").get<double>();
        auto mk = je.at("mark").get<std::vector<double>>();
        e.mark = Eigen::Map<const Vec>(mk.data(), static_cast<long>(mk.size()));
        e.kept = je.at("kept").get<bool>();
        es.events.push_back(e);
    }
    for (const auto& ja : j.at("nu_atoms")) {
        auto mk = ja.at("mark").get<std::vector<double>>();
        es.nu.atoms.emplace_back(Eigen::Map<const Vec>(mk.data(), static_cast<long>(mk.size())),
                                 ja.at("weight").get<double>());
    }
    return es;
}

std::string grid_path_to_csv(const GridPath& p) {
    std::ostringstream os;
    os << "time";
    for (int c = 0; c < p.dim(); ++c) os << ",c" << c;
    os << "\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        os << fmt17(p.grid()[i]);
        for (int c = 0; c < p.dim(); ++c) os << "," << fmt17(p.value(i)[c]);
        os << "\n";
    }
    return os.str();
}

GridPath grid_path_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line); // header
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        times.push_back(row[0]);
        rows.push_back(std::vector<double>(row.begin() + 1, row.end()));
    }
    TimeGrid grid(times);
    std::vector<Vec> vals;
    for (const auto& r : rows)
        vals.push_back(Eigen::Map<const Vec>(r.data(), static_cast<long>(r.size())));
    return GridPath(grid, std::move(vals));
}

std::string events_to_csv(const MarkedEventStream& es) {
    std::ostringstream os;
    int md = es.events.empty() ? 1 : static_cast<int>(es.events[0].mark.size());
    os << "time";
    for (int c = 0; c < md; ++c) os << ",mark" << c;
    os << ",kept\n";
    for (const auto& e : es.events) {
        os << fmt17(e.time);
        for (int c = 0; c < md; ++c) os << "," << fmt17(e.mark[c]);
        os << "," << (e.kept ? 1 : 0) << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_file: cannot open " + path);
    f << contents;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_file: cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::uint64_t canonical_hash(const json& j) {
    std::string s = j.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace rpf
