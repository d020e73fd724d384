#include "lcgf/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lcgf {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("atomic_write_file: cannot open " + tmp);
        os.write(content.data(), std::streamsize(content.size()));
        if (!os) throw std::runtime_error("atomic_write_file: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic_write_file: rename failed for " + path);
}

std::string render_csv(const std::vector<ScanRow>& rows,
                       const std::map<std::string, std::string>& config_echo) {
    std::ostringstream os;
    for (const auto& [k, v] : config_echo) os << "# " << k << "=" << v << "\n";
    os << "M,N,K,L,samples,mean,stderr,ci_low,ci_high,quantity_tag\n";
    for (const auto& r : rows) {
        os << format_double(r.M) << ',' << format_double(r.N) << ',' << format_double(r.K) << ','
           << format_double(r.L) << ',' << r.samples << ',' << format_double(r.mean) << ','
           << format_double(r.stderr_) << ',' << format_double(r.ci_low) << ','
           << format_double(r.ci_high) << ',' << r.tag << "\n";
    }
    return os.str();
}

namespace {

nlohmann::ordered_json echo_to_json(const std::map<std::string, std::string>& config_echo) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_echo) j[k] = v;
    return j;
}

}  // namespace

std::string render_json(const std::vector<EstimateReport>& reports,
                        const std::map<std::string, std::string>& config_echo) {
    nlohmann::ordered_json out;
    out["config"] = echo_to_json(config_echo);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["quantity"] = r.quantity;
        j["d"] = r.d;
        j["N"] = r.N;
        j["law"] = r.law;
        j["potential"] = r.potential;
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        j["params"] = params;
        j["samples"] = r.samples;
        j["mean"] = r.mean;
        j["stderr"] = r.stderr_;
        j["ci"] = {r.ci_low, r.ci_high};
        j["tail_flag"] = r.tail_flag;
        j["seed"] = r.seed;
        arr.push_back(std::move(j));
    }
    out["reports"] = std::move(arr);
    return out.dump(2) + "\n";
}

std::string render_json(const std::vector<ScanRow>& rows,
                        const std::map<std::string, std::string>& config_echo) {
    nlohmann::ordered_json out;
    out["config"] = echo_to_json(config_echo);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["M"] = r.M;
        j["N"] = r.N;
        j["K"] = r.K;
        j["L"] = r.L;
        j["samples"] = r.samples;
        j["mean"] = r.mean;
        j["stderr"] = r.stderr_;
        j["ci"] = {r.ci_low, r.ci_high};
        j["quantity_tag"] = r.tag;
        arr.push_back(std::move(j));
    }
    out["rows"] = std::move(arr);
    return out.dump(2) + "\n";
}

std::map<std::string, std::string> parse_config_echo(const std::string& content) {
    std::map<std::string, std::string> echo;
    if (!content.empty() && content[0] == '{') {
        auto j = nlohmann::json::parse(content);
        for (auto& [k, v] : j.at("config").items()) echo[k] = v.get<std::string>();
        return echo;
    }
    std::istringstream is(content);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) != 0) break;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        echo[line.substr(2, eq - 2)] = line.substr(eq + 1);
    }
    return echo;
}

}  // namespace lcgf
