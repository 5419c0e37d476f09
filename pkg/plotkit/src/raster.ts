/** Software RGBA canvas: lines (solid or dashed), markers, bitmap text. */

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyphFor } from "./font.js";

export type Color = readonly [number, number, number];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array;

  constructor(width: number, height: number, background: Color = [255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.pixels[i * 4] = background[0];
      this.pixels[i * 4 + 1] = background[1];
      this.pixels[i * 4 + 2] = background[2];
      this.pixels[i * 4 + 3] = 255;
    }
  }

  set(x: number, y: number, color: Color): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const i = (yi * this.width + xi) * 4;
    this.pixels[i] = color[0];
    this.pixels[i + 1] = color[1];
    this.pixels[i + 2] = color[2];
    this.pixels[i + 3] = 255;
  }

  /** Square dot of the given half-size; a thickness-control for lines. */
  dot(x: number, y: number, color: Color, half = 0): void {
    for (let dy = -half; dy <= half; dy++) {
      for (let dx = -half; dx <= half; dx++) {
        this.set(x + dx, y + dy, color);
      }
    }
  }

  /**
   * Bresenham line. `dash` is a [on, off] pixel pattern; omit for solid.
   */
  line(x0: number, y0: number, x1: number, y1: number, color: Color,
       dash?: readonly [number, number], half = 0): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    const period = dash ? dash[0] + dash[1] : 1;
    for (;;) {
      if (!dash || step % period < dash[0]) this.dot(xa, ya, color, half);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
      step += 1;
    }
  }

  marker(x: number, y: number, color: Color): void {
    this.dot(x, y, color, 2);
  }

  /** Vertical error bar with end caps. */
  errorBar(x: number, yLow: number, yHigh: number, color: Color): void {
    this.line(x, yLow, x, yHigh, color);
    this.line(x - 3, yLow, x + 3, yLow, color);
    this.line(x - 3, yHigh, x + 3, yHigh, color);
  }

  text(x: number, y: number, message: string, color: Color, scale = 1): void {
    let cx = Math.round(x);
    for (const char of message) {
      const glyph = glyphFor(char);
      for (let row = 0; row < GLYPH_HEIGHT; row++) {
        for (let col = 0; col < GLYPH_WIDTH; col++) {
          if (glyph[row][col] === "1") {
            for (let sy = 0; sy < scale; sy++) {
              for (let sx = 0; sx < scale; sx++) {
                this.set(cx + col * scale + sx, y + row * scale + sy, color);
              }
            }
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }

  static textWidth(message: string, scale = 1): number {
    return message.length * (GLYPH_WIDTH + 1) * scale - scale;
  }
}
