#pragma once

#define RIESZLAB_VERSION "0.1.0"
