#pragma once

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "quadrep/forms.hpp"
#include "quadrep/interval.hpp"

namespace quadrep {

using Json = nlohmann::ordered_json;

// RFC-4180 style: header row, LF endings, quoting only when needed
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void row(const std::vector<std::string>& fields);
    ~CsvWriter();

private:
    std::ofstream out_;
};

std::string csv_escape(const std::string& field);

// form description file {"dim": k, "gram": [[...]]}; entries exceeding 64
// bits are carried as decimal strings
Json form_to_json(const QuadraticForm& f);
QuadraticForm form_from_json(const Json& j, const std::string& id = "");
void write_form_file(const std::string& path, const QuadraticForm& f);
QuadraticForm read_form_file(const std::string& path);

Json int_to_json(const Int& v);
Int int_from_json(const Json& j);
Json interval_to_json(const Interval& iv);

}  // namespace quadrep
