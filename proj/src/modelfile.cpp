#include "arithbf/modelfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arithbf::modelfile {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& why)
{
    throw std::invalid_argument(origin + ": " + why);
}

json parse_json(const std::string& text, const std::string& origin)
{
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(origin, "not valid JSON");
    if (!j.is_object()) fail(origin, "top level must be a JSON object");
    return j;
}

const json& field(const json& j, const char* name, const std::string& origin)
{
    const auto it = j.find(name);
    if (it == j.end()) fail(origin, std::string("missing field '") + name + "'");
    return *it;
}

std::int64_t int_field(const json& j, const char* name, const std::string& origin)
{
    const json& v = field(j, name, origin);
    if (!v.is_number_integer())
        fail(origin, std::string("field '") + name + "' must be an integer");
    return v.get<std::int64_t>();
}

abgroup::InvariantFactors factors_field(const json& j, const char* name,
                                        const std::string& origin)
{
    const json& v = field(j, name, origin);
    if (!v.is_array()) fail(origin, std::string("field '") + name + "' must be an array");
    std::vector<std::int64_t> fs;
    for (const json& e : v) {
        if (!e.is_number_integer())
            fail(origin, std::string("field '") + name + "' must contain integers");
        fs.push_back(e.get<std::int64_t>());
    }
    try {
        return abgroup::InvariantFactors(std::move(fs));
    } catch (const std::invalid_argument& e) {
        fail(origin, std::string("field '") + name + "': " + e.what());
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

bf_gm::FieldData parse_field_data(const std::string& text, const std::string& origin)
{
    const json j = parse_json(text, origin);
    bf_gm::FieldData fd;
    const json& label = field(j, "label", origin);
    if (!label.is_string()) fail(origin, "field 'label' must be a string");
    fd.label = label.get<std::string>();
    fd.cl = factors_field(j, "class_group_invariants", origin);
    fd.unit_rank = int_field(j, "unit_rank", origin);
    fd.w = int_field(j, "roots_of_unity_order", origin);
    fd.degree = int_field(j, "degree", origin);
    try {
        fd.validate();
    } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
    }
    return fd;
}

bf_av::AVModel parse_av_model(const std::string& text, const std::string& origin)
{
    const json j = parse_json(text, origin);
    bf_av::AVModel m;
    m.n = int_field(j, "n", origin);
    m.mw_a = factors_field(j, "mw_a", origin);
    m.mw_b = factors_field(j, "mw_b", origin);
    m.sha_a = factors_field(j, "sha_a", origin);
    m.sha_b = factors_field(j, "sha_b", origin);

    const json& d = field(j, "delta", origin);
    if (d.is_string()) {
        if (d.get<std::string>() != "canonical")
            fail(origin, "delta string form must be \"canonical\"");
        m.delta.kind = bf_av::DeltaChoice::Kind::canonical;
    } else if (d.is_object() && d.contains("matrix")) {
        const json& rows = d["matrix"];
        if (!rows.is_array()) fail(origin, "delta.matrix must be an array of rows");
        m.delta.kind = bf_av::DeltaChoice::Kind::matrix;
        for (const json& row : rows) {
            if (!row.is_array()) fail(origin, "delta.matrix rows must be arrays");
            std::vector<std::int64_t> r;
            for (const json& e : row) {
                if (!e.is_number_integer())
                    fail(origin, "delta.matrix entries must be integers");
                r.push_back(e.get<std::int64_t>());
            }
            m.delta.matrix.push_back(std::move(r));
        }
    } else if (d.is_object() && d.contains("seed")) {
        if (!d["seed"].is_number_integer())
            fail(origin, "delta.seed must be an integer");
        m.delta.kind = bf_av::DeltaChoice::Kind::seed;
        m.delta.seed = d["seed"].get<std::uint64_t>();
    } else {
        fail(origin, "delta must be \"canonical\", {\"matrix\": ...}, or {\"seed\": ...}");
    }

    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
    }
    return m;
}

bf_gm::FieldData load_field_data(const std::string& path)
{
    return parse_field_data(read_file(path), path);
}

bf_av::AVModel load_av_model(const std::string& path)
{
    return parse_av_model(read_file(path), path);
}

} // namespace arithbf::modelfile
