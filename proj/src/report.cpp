#include "quadrep/report.hpp"

#include "quadrep/errors.hpp"

namespace quadrep {

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) fail(Err::Usage, "cannot open " + path + " for writing");
}

CsvWriter::~CsvWriter() = default;

std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
}

Json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return Json(v.get_si());
    return Json(v.get_str());
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return to_int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    fail(Err::Usage, "expected integer or decimal string in JSON");
}

Json interval_to_json(const Interval& iv) {
    Json j;
    j["lo"] = decimal_string(iv.lo, 15, Round::Down);
    j["hi"] = decimal_string(iv.hi, 15, Round::Up);
    return j;
}

Json form_to_json(const QuadraticForm& f) {
    Json j;
    j["dim"] = f.dim;
    Json rows = Json::array();
    for (int i = 0; i < f.dim; ++i) {
        Json row = Json::array();
        for (int c = 0; c < f.dim; ++c) row.push_back(int_to_json(f.gram[i][c]));
        rows.push_back(row);
    }
    j["gram"] = rows;
    return j;
}

QuadraticForm form_from_json(const Json& j, const std::string& id) {
    if (!j.contains("dim") || !j.contains("gram")) fail(Err::Usage, "form JSON needs dim, gram");
    int k = j["dim"].get<int>();
    const Json& g = j["gram"];
    if (!g.is_array() || static_cast<int>(g.size()) != k)
        fail(Err::Usage, "gram must be a dim x dim array");
    IMat m(k, IVec(k));
    for (int i = 0; i < k; ++i) {
        if (!g[i].is_array() || static_cast<int>(g[i].size()) != k)
            fail(Err::Usage, "gram must be a dim x dim array");
        for (int c = 0; c < k; ++c) m[i][c] = int_from_json(g[i][c]);
    }
    return validate(m, id);
}

void write_form_file(const std::string& path, const QuadraticForm& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::Usage, "cannot open " + path + " for writing");
    out << form_to_json(f).dump(2) << "\n";
}

QuadraticForm read_form_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::Usage, "cannot open form file " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(Err::Usage, std::string("bad JSON in ") + path + ": " + e.what());
    }
    return form_from_json(j, path);
}

}  // namespace quadrep
