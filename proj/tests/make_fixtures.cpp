// Writes input files for the CLI tests into the directory given as argv[1]:
// a latitude circle (not an NPC), the octant fan surface, and a small
// positive-orthant chart.

#include <filesystem>
#include <fstream>

#include "raygeo/bloch.hpp"
#include "raygeo/geodesics.hpp"
#include "raygeo/json_io.hpp"
#include "raygeo/nullphase.hpp"

using namespace raygeo;

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : ".";
    std::filesystem::create_directories(dir);
    auto write = [&dir](const std::string& name, const Json& j) {
        std::ofstream out(dir + "/" + name);
        if (!out) return false;
        out << j.dump(2) << "\n";
        return true;
    };
    bool ok = true;
    ok = ok && write("latitude.json", curve_to_json(latitude_circle(1.0, 160)));
    ok = ok && write("splus.json", chart_to_json(sphere_plus_chart(3, 7)));
    const auto patch = bloch_patch_chart(0.9, 1.1, 0.3, 0.5, 11, 11);
    ok = ok && write("bloch_patch.json", chart_to_json(patch));
    return ok ? 0 : 1;
}
