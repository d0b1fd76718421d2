// Shape viewer: shaded mesh plus the colored surface-point preview, with an
// orbit camera that is independent of the canvas camera and never mutates
// the modeling session.

import * as THREE from 'three';
import { OrbitControls } from 'three/examples/jsm/controls/OrbitControls.js';
import { parseObj } from './api';

export class ShapeViewer {
  private renderer: THREE.WebGLRenderer;
  private scene: THREE.Scene;
  private camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private meshObject: THREE.Mesh | null = null;
  private pointsObject: THREE.Points | null = null;

  constructor(container: HTMLElement) {
    const w = container.clientWidth || 512;
    const h = container.clientHeight || 512;
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(w, h);
    this.renderer.setClearColor(0x1c1f26);
    container.appendChild(this.renderer.domElement);

    this.scene = new THREE.Scene();
    this.camera = new THREE.PerspectiveCamera(40, w / h, 0.01, 10);
    this.camera.position.set(1.1, 0.8, 1.1);
    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.controls.target.set(0, 0, 0);

    this.scene.add(new THREE.AmbientLight(0xffffff, 0.45));
    const key = new THREE.DirectionalLight(0xffffff, 1.0);
    key.position.set(2, 3, 2);
    this.scene.add(key);
    const rim = new THREE.DirectionalLight(0x8899ff, 0.4);
    rim.position.set(-2, -1, -2);
    this.scene.add(rim);
    this.scene.add(new THREE.AxesHelper(0.55));

    const animate = () => {
      requestAnimationFrame(animate);
      this.controls.update();
      this.renderer.render(this.scene, this.camera);
    };
    animate();
  }

  showMeshFromObj(objText: string): void {
    const { positions, indices } = parseObj(objText);
    if (this.meshObject) {
      this.scene.remove(this.meshObject);
      this.meshObject.geometry.dispose();
    }
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute('position', new THREE.BufferAttribute(positions, 3));
    geometry.setIndex(new THREE.BufferAttribute(indices, 1));
    geometry.computeVertexNormals();
    const material = new THREE.MeshStandardMaterial({
      color: 0xd8cfc0,
      roughness: 0.7,
      metalness: 0.05,
      side: THREE.DoubleSide,
    });
    this.meshObject = new THREE.Mesh(geometry, material);
    this.scene.add(this.meshObject);
  }

  showPointPreview(points: number[][]): void {
    if (this.pointsObject) {
      this.scene.remove(this.pointsObject);
      this.pointsObject.geometry.dispose();
    }
    if (!points.length) {
      this.pointsObject = null;
      return;
    }
    const positions = new Float32Array(points.length * 3);
    const colors = new Float32Array(points.length * 3);
    points.forEach((p, i) => {
      positions.set([p[0], p[1], p[2]], i * 3);
      colors.set([p[3], p[4], p[5]], i * 3);
    });
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute('position', new THREE.BufferAttribute(positions, 3));
    geometry.setAttribute('color', new THREE.BufferAttribute(colors, 3));
    const material = new THREE.PointsMaterial({ size: 0.015, vertexColors: true });
    this.pointsObject = new THREE.Points(geometry, material);
    this.scene.add(this.pointsObject);
  }

  setPointsVisible(visible: boolean): void {
    if (this.pointsObject) this.pointsObject.visible = visible;
  }
}
