#pragma once

#include "mbhalton/characteristic.hpp"
#include "mbhalton/discrepancy.hpp"
#include "mbhalton/io.hpp"
#include "mbhalton/numeration.hpp"
#include "mbhalton/rauzy.hpp"
#include "mbhalton/rotation.hpp"
#include "mbhalton/spectral.hpp"
#include "mbhalton/verify.hpp"
#include "mbhalton/wide.hpp"
