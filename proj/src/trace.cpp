#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "navsim/errors.hpp"
#include "navsim/harness.hpp"

namespace navsim {

namespace {

nlohmann::ordered_json to_json(const TraceRecord& r)
{
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["x"] = r.pose.x;
    j["y"] = r.pose.y;
    j["theta"] = r.pose.theta;
    j["est_x"] = r.estimate.x;
    j["est_y"] = r.estimate.y;
    j["est_theta"] = r.estimate.theta;
    j["v"] = r.v;
    j["w"] = r.w;
    j["p_t"] = r.p_t;
    j["s_k"] = r.s_k;
    j["mode"] = to_string(r.mode);
    j["collision"] = r.collision;
    j["clearance"] = r.clearance;
    return j;
}

TraceRecord from_json(const nlohmann::json& j)
{
    TraceRecord r;
    r.t = j.at("t").get<double>();
    r.pose = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>()};
    r.estimate = {j.at("est_x").get<double>(), j.at("est_y").get<double>(), j.at("est_theta").get<double>()};
    r.v = j.at("v").get<double>();
    r.w = j.at("w").get<double>();
    r.p_t = j.at("p_t").get<double>();
    r.s_k = j.at("s_k").get<double>();
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    r.collision = j.at("collision").get<bool>();
    r.clearance = j.at("clearance").get<double>();
    return r;
}

}  // namespace

std::string serialize_trace(const Trace& trace)
{
    std::string out;
    for (const auto& r : trace) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

Trace parse_trace(const std::string& text, const std::string& origin)
{
    Trace trace;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty())
            continue;
        try {
            trace.push_back(from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(n, origin + ": malformed trace record (" + e.what() + ")");
        } catch (const ContractError& e) {
            throw ParseError(n, origin + ": " + e.what());
        }
    }
    return trace;
}

void write_trace(const Trace& trace, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError(path, "cannot open for writing");
    out << serialize_trace(trace);
    if (!out)
        throw IoError(path, "write failed");
}

Trace read_trace(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path, "no such file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str(), path);
}

std::uint64_t trace_hash(const Trace& trace)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : serialize_trace(trace)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace navsim
