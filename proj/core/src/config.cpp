#include "qdiff/config.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace qdiff {

namespace {

std::vector<double> parse_numbers(const std::string& text,
                                  const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw DomainError(what + ": bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

PeriodicField parse_field_inline(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw DomainError("field '" + text +
                          "': expected const:, cos2: or spline: syntax");
    const std::string kind = text.substr(0, colon);
    const auto args = parse_numbers(text.substr(colon + 1), "field " + kind);

    if (kind == "const") {
        if (args.size() != 1)
            throw DomainError("const: takes exactly one value");
        return PeriodicField::constant(args[0]);
    }
    if (kind == "cos2") {
        if (args.size() != 3 && args.size() != 4)
            throw DomainError(
                "cos2: takes offset,amplitude,phase[,period]");
        const double period = args.size() == 4 ? args[3] : 1.0;
        if (!(period > 0.0)) throw DomainError("cos2: period must be > 0");
        return PeriodicField::cosine_squared(args[0], args[1], args[2],
                                             period);
    }
    if (kind == "spline") {
        auto control = args;
        if (control.size() == 3) control.push_back(control[0]);  // seam implied
        if (control.size() != 4)
            throw DomainError("spline: takes four control values");
        return build_periodic_spline(
            {control[0], control[1], control[2], control[3]});
    }
    throw DomainError("unknown field kind '" + kind + "'");
}

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const std::string& context) {
    if (!j.is_object())
        throw DomainError(context + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end())
            throw DomainError(context + ": unknown key '" + key + "'");
    }
}

PeriodicField parse_field_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_field_inline(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind"))
        throw DomainError("field record: expected an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();

    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "value", "period"}, "constant field");
        const double period = j.value("period", 1.0);
        return PeriodicField::constant(j.at("value").get<double>(), period);
    }
    if (kind == "cos2") {
        reject_unknown_keys(j, {"kind", "offset", "amplitude", "phase",
                                "period"},
                            "cos2 field");
        return PeriodicField::cosine_squared(
            j.value("offset", 0.0), j.value("amplitude", 1.0),
            j.value("phase", 0.0), j.value("period", 1.0));
    }
    if (kind == "spline") {
        reject_unknown_keys(j, {"kind", "control"}, "spline field");
        const auto control = j.at("control").get<std::vector<double>>();
        if (control.size() != 4)
            throw DomainError("spline field: control must have 4 values");
        return build_periodic_spline(
            {control[0], control[1], control[2], control[3]});
    }
    if (kind == "sampled") {
        reject_unknown_keys(j, {"kind", "values", "period"}, "sampled field");
        return PeriodicField::sampled(
            j.at("values").get<std::vector<double>>(), j.value("period", 1.0));
    }
    throw DomainError("field record: unknown kind '" + kind + "'");
}

}  // namespace qdiff
