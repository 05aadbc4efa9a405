#include "dnls/io.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

using namespace dnls;
using testutil::code_of;

namespace {

const NormalizedPotential& cubic()
{
    static const auto np = normalize(builtin_potential("cubic"));
    return np;
}

std::size_t count_lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("number format round-trips")
{
    for (double x : {0.0, 1.0, -0.1, 1.0 / 3.0, 6.02214076e23, 4.9e-324, 0.6088642363053934}) {
        const auto s = io::fmt(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(io::fmt(0.5) == "5.0000000000000000e-01");
}

TEST_CASE("profile JSON round-trip is exact")
{
    const auto r = minimize(Setting::InterSite, 9, cubic(), 0.7);
    const auto doc = io::profile_json(r.profile, 0.7, "cubic", r.energy, r.residual);
    const auto back = io::parse_profile_json(doc.dump(2));
    CHECK(back.profile == r.profile);
    CHECK(back.beta == 0.7);
    CHECK(back.potential == "cubic");
    CHECK(back.energy == r.energy.total);
    CHECK(back.residual == r.residual);
    CHECK(doc.begin().key() == "schema_version");

    const auto path = testutil::temp_path("io/profile.json");
    io::write_json(path, doc);
    CHECK(io::read_profile_json(path).profile == r.profile);
    std::filesystem::remove_all(path.parent_path());
}

TEST_CASE("malformed profile JSON")
{
    CHECK(code_of([] { io::parse_profile_json("{"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { io::parse_profile_json("{}"); }) == ErrorCode::MalformedInput);
    const std::string base = R"({"schema_version":1,"setting":"onsite","N":2,"beta":1,"potential":"cubic",)"
                             R"("energy":{"total":0},"residual":0,"values":[0.2,0.4]})";
    CHECK_NOTHROW(io::parse_profile_json(base));
    auto edit = [&](const std::string& from, const std::string& to) {
        std::string s = base;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    CHECK(code_of([&] { io::parse_profile_json(edit("\"N\":2", "\"N\":3")); }) == ErrorCode::MalformedInput);
    CHECK(code_of([&] { io::parse_profile_json(edit("[0.2,0.4]", "[0.4,0.2]")); }) == ErrorCode::MalformedInput);
    CHECK(code_of([&] { io::parse_profile_json(edit("onsite", "sideways")); }) == ErrorCode::MalformedInput);
    CHECK(code_of([&] { io::parse_profile_json(edit("\"schema_version\":1", "\"schema_version\":7")); })
          == ErrorCode::MalformedInput);
    CHECK(code_of([] { io::read_profile_json("/nonexistent/dir/p.json"); }) == ErrorCode::MalformedInput);
}

TEST_CASE("CSV layouts")
{
    const Profile p(Setting::OnSite, {0.5, 0.75, 0.875});
    const auto prof = io::profile_csv(p, 2);
    CHECK(prof.rfind("j,u\n", 0) == 0);
    CHECK(count_lines(prof) == 1 + 11);
    const auto decay = io::decay_csv(p);
    std::istringstream in(decay);
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header == "j,w,kappa");
    CHECK(first == io::fmt(1.0) + "," + io::fmt(0.5) + ",");
    CHECK(second == io::fmt(2.0) + "," + io::fmt(0.25) + "," + io::fmt(0.5));
    const auto psi = io::psi_table_csv(cubic(), 5);
    CHECK(count_lines(psi) == 6);
    CHECK(psi.find(io::fmt(1.0) + "," + io::fmt(1.0) + "," + io::fmt(1.0)) != std::string::npos);
    CHECK(code_of([] { io::psi_table_csv(cubic(), 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("serialization is deterministic")
{
    const auto a = minimize(Setting::OnSite, 7, cubic(), 1.0);
    const auto b = minimize(Setting::OnSite, 7, cubic(), 1.0);
    CHECK(io::trace_csv(a) == io::trace_csv(b));
    CHECK(io::profile_json(a.profile, 1.0, "cubic", a.energy, a.residual).dump(2)
          == io::profile_json(b.profile, 1.0, "cubic", b.energy, b.residual).dump(2));
    CHECK(io::decay_json(decay_rate(1.0, 4.0), 1.0).dump() == io::decay_json(decay_rate(1.0, 4.0), 1.0).dump());
}

}
