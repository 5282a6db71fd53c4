#include <map>
#include <stdexcept>

#include "poromech/scenario.hpp"

namespace poromech::io {

namespace {

// Terzaghi and Mandel times follow t_scale = h²/c = 2223.2158590308372 s for
// the properties below.
const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> table = {
        {"terzaghi", R"([scenario]
name = terzaghi
description = Consolidation of a 1 m column under a 10 kPa surface load, drained at the top

[geometry]
Lx = 0.1
Ly = 1
nx = 1
ny = 80

# lambda = mu = 40 MPa / phi0 so that the skeleton stiffness is 40 MPa
[solid]
model = neo_hookean
lambda = 64e6
mu = 64e6
phi0 = 0.625

[mixture]
volume_fraction = incompressible_solid

[fluid.water]
model = constant_bulk
K_f = 2.27e9
rho_ref = 1000
phi0 = 0.375
P0 = 375
conductivity = 1e-7

[bc.left]
ux = 0

[bc.right]
ux = 0

[bc.bottom]
ux = 0
uy = 0

[bc.top]
traction = 0 -1e4
eta.water = 0

[time]
t_end = 1111.6079295154186
dt = 5.558039647577093
dt0 = 0.0022232158590308372
plot_times = 22.232158590308373 111.16079295154186 222.32158590308373 1111.6079295154186

[output]
directory = out/terzaghi
cadence = 50
probes = bottom 0.05 0; middle 0.05 0.5
profile = 0.05 1 0.05 0
profile_points = 41
)"},
        {"mandel", R"([scenario]
name = mandel
description = Mandel strip squeezed by a rigid plate, draining at x = a

[geometry]
Lx = 1
Ly = 1
nx = 40
ny = 4

[solid]
model = neo_hookean
lambda = 64e6
mu = 64e6
phi0 = 0.625

[mixture]
volume_fraction = incompressible_solid

[fluid.water]
model = constant_bulk
K_f = 2.27e9
rho_ref = 1000
phi0 = 0.375
P0 = 375
conductivity = 1e-7

[bc.left]
ux = 0

[bc.bottom]
uy = 0

[bc.top]
traction = 0 -1e4
tie = uy

[bc.right]
eta.water = 0

[time]
t_end = 1111.6079295154186
dt = 5.558039647577093
dt0 = 0.0022232158590308372
growth = 1.25
plot_times = 22.232158590308373 222.32158590308373 1111.6079295154186

[output]
directory = out/mandel
cadence = 50
probes = A 0 0.5; B 0.5 0.5; C 0.9 0.5
profile = 0 0.5 1 0.5
profile_points = 41
)"},
        {"vdw_injection", R"([scenario]
name = vdw_injection
description = CO2 injected at the top of a 10 m x 5 m block held just below the vapor spinodal at 270 K

[geometry]
Lx = 10
Ly = 5
nx = 20
ny = 10

[solid]
model = neo_hookean
lambda = 57.7e6
mu = 38.46e6
phi0 = 0.8

[mixture]
volume_fraction = affine_solid

[fluid.co2]
model = vdw
R = 8.32
T = 270
molar_mass = 0.044
a = 0.364
b = 42.67e-6
phi0 = 0.2
p = 5.165e6
conductivity = 0.1

[bc.left]
ux = 0

[bc.right]
ux = 0

[bc.bottom]
ux = 0
uy = 0

# overburden balancing the initial pore pressure carried by the pore fraction
[bc.top]
traction = 0 -1.033e6
flux.co2 = 4.4

[time]
t_end = 20
dt = 0.2
dt0 = 0.01
growth = 1.5
plot_times = 5 10 20

[output]
directory = out/vdw_injection
cadence = 20
probes = inlet 5 5; below 5 4.5; deep 5 4; corner 0 0
profile = 5 5 5 0
profile_points = 41

[solver]
rel_tol = 1e-11
transport = upwind
)"},
        {"two_gas", R"([scenario]
name = two_gas
description = A second gas injected at the top of a block filled with a first gas held at the far boundaries

[geometry]
Lx = 10
Ly = 5
nx = 20
ny = 10

[solid]
model = neo_hookean
lambda = 57.7e6
mu = 38.6e6
phi0 = 0.8

[mixture]
volume_fraction = affine_solid

[fluid.gas1]
model = ideal_gas
R = 8.32
T = 300
molar_mass = 0.029
phi0 = 0.1999
p = 2e7
conductivity = 0.1

# trace of gas 2 so that both phases exist everywhere
[fluid.gas2]
model = ideal_gas
R = 8.32
T = 300
molar_mass = 0.044
phi0 = 0.0001
p = 2e7
conductivity = 0.2

[bc.left]
ux = 0
p.gas1 = 2e7

[bc.right]
ux = 0
p.gas1 = 2e7

[bc.bottom]
ux = 0
uy = 0
p.gas1 = 2e7

[bc.top]
flux.gas2 = 0.44

[time]
t_end = 550
dt = 5
dt0 = 0.1
growth = 1.5
plot_times = 50 200 550

[output]
directory = out/two_gas
cadence = 10
probes = inlet 5 5; below 5 4.5; deep 5 4; corner 0 0; side 0 5
profile = 5 5 5 0
profile_points = 41

[solver]
transport = upwind
)"},
        {"unsaturated", R"([scenario]
name = unsaturated
description = Water injected at the top of a gas-filled block; air drains through the sides

[geometry]
Lx = 10
Ly = 5
nx = 20
ny = 10

[solid]
model = neo_hookean
lambda = 57.7e6
mu = 38.6e6
phi0 = 0.9

[mixture]
volume_fraction = unsaturated

[fluid.air]
model = ideal_gas
R = 8.32
T = 300
molar_mass = 0.029
phi0 = 0.099
p = 3300
kappa = 1.8e-7
viscosity = 1.8e-5

# a thin film of water so that the liquid phase exists everywhere
[fluid.water]
model = incompressible_liquid
rho_tilde = 1000
phi0 = 0.001
p = 3300
kappa = 1.8e-7
viscosity = 1e-3

[bc.left]
ux = 0
p.air = 3300

[bc.right]
ux = 0
p.air = 3300

[bc.bottom]
ux = 0
uy = 0

[bc.top]
flux.water = 200

# the inlet elements fill with water shortly after 0.1 s
[time]
t_end = 0.1
dt = 0.005
dt0 = 0.001
growth = 1.5
plot_times = 0.025 0.05 0.1

[output]
directory = out/unsaturated
cadence = 20
probes = inlet 5 5; below 5 4.5; field 1 1
profile = 5 5 5 0
profile_points = 41

[solver]
rel_tol = 1e-11
transport = upwind
)"},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : presets()) out.push_back(k);
    return out;
}

const std::string& preset_text(const std::string& name) {
    const auto& t = presets();
    const auto it = t.find(name);
    if (it == t.end()) throw std::out_of_range("unknown preset '" + name + "'");
    return it->second;
}

ScenarioConfig preset(const std::string& name) { return parse_config(preset_text(name)); }

}  // namespace poromech::io
